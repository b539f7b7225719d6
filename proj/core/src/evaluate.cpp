#include "ringrec/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ringrec/baselines.hpp"
#include "ringrec/fbp.hpp"
#include "ringrec/metrics.hpp"
#include "ringrec/solver.hpp"

namespace ringrec {

std::map<std::string, MethodAggregate> MetricReport::aggregate() const {
    std::map<std::string, MethodAggregate> out;
    std::map<std::string, std::vector<const MetricRow*>> by_method;
    for (const auto& r : rows) by_method[r.method].push_back(&r);
    for (auto& [method, list] : by_method) {
        MethodAggregate a;
        a.count = static_cast<int>(list.size());
        auto mean_std = [&](auto getter, double& mean, double& sd) {
            double m = 0;
            for (auto* r : list) m += getter(*r);
            m /= a.count;
            double s = 0;
            for (auto* r : list) {
                const double d = getter(*r) - m;
                s += d * d;
            }
            mean = m;
            sd = a.count > 1 ? std::sqrt(s / (a.count - 1)) : 0.0;
        };
        mean_std([](const MetricRow& r) { return r.mae_hu; }, a.mae_mean, a.mae_std);
        mean_std([](const MetricRow& r) { return r.psnr_db; }, a.psnr_mean, a.psnr_std);
        mean_std([](const MetricRow& r) { return r.ssim; }, a.ssim_mean, a.ssim_std);
        out[method] = a;
    }
    return out;
}

Grid2D reconstruct_with(const std::string& method, const Grid2D& y, const FanBeamGeometry& g,
                        const std::vector<UnrolledModel>& models, const BaselineParams& bp) {
    if (method == "fbp") return fbp(y, g);
    if (method == "norm") return fbp(norm_correct(y, bp.norm_window), g);
    if (method == "wavefft")
        return fbp(wavefft_correct(y, bp.wavefft_levels, bp.wavefft_sigma,
                                   wavelet_from_name(bp.wavefft_wavelet)),
                   g);
    if (method == "synthrar" || method.starts_with("synthrar:")) {
        std::string want_mode =
            method == "synthrar" ? "" : method.substr(std::string("synthrar:").size());
        const UnrolledModel* pick = nullptr;
        for (const auto& m : models) {
            if (want_mode.empty() || mode_to_string(m.cfg.mode) == want_mode) {
                pick = &m;
                break;
            }
        }
        if (!pick)
            fail("method '" + method + "': no checkpoint with matching mode loaded");
        return unrolled_reconstruct(y, g, *pick).x_hat;
    }
    fail("unknown method '" + method + "' (valid: fbp, norm, wavefft, synthrar[:mode])");
}

MetricReport evaluate(const std::vector<TrainingSample>& samples, const FanBeamGeometry& g,
                      const std::vector<std::string>& methods,
                      const std::vector<UnrolledModel>& models, const BaselineParams& bp,
                      std::optional<double> data_range) {
    MetricReport report;
    report.methods = methods;
    const std::vector<uint8_t> mask = inscribed_circle_mask(g.image_size);
    for (size_t i = 0; i < samples.size(); ++i) {
        const Grid2D gt_hu = mu_to_hu(samples[i].x_clean);
        double range = data_range.value_or(0.0);
        if (!data_range) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (size_t j = 0; j < gt_hu.size(); ++j) {
                if (!mask[j]) continue;
                lo = std::min(lo, gt_hu.data()[j]);
                hi = std::max(hi, gt_hu.data()[j]);
            }
            range = hi - lo;
            if (!(range > 0)) range = 1.0;
        }
        for (const auto& method : methods) {
            const Grid2D rec = reconstruct_with(method, samples[i].y_corrupt, g, models, bp);
            const Grid2D rec_hu = mu_to_hu(rec);
            MetricRow row;
            row.sample_id = "sample_" + std::to_string(i);
            row.method = method;
            row.mae_hu = mae(rec_hu, gt_hu, mask);
            row.psnr_db = psnr(rec_hu, gt_hu, range, mask);
            row.ssim = ssim(rec_hu, gt_hu, range, mask);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

namespace {
std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}
}  // namespace

void write_metrics_csv(const MetricReport& report, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) fail("write_metrics_csv: cannot open " + path.string());
    f << "sample_id,method,mae_hu,psnr_db,ssim\n";
    for (const auto& r : report.rows) {
        f << r.sample_id << "," << r.method << "," << fmt_double(r.mae_hu) << ","
          << fmt_double(r.psnr_db) << "," << fmt_double(r.ssim) << "\n";
    }
    if (!f) fail("write_metrics_csv: I/O failure writing " + path.string());
}

std::string format_metrics_table(const MetricReport& report) {
    auto agg = report.aggregate();
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-16s %6s %16s %18s %16s\n", "method", "n", "MAE [HU]",
                  "PSNR [dB]", "SSIM");
    os << buf;
    for (const auto& method : report.methods) {
        auto it = agg.find(method);
        if (it == agg.end()) continue;
        const MethodAggregate& a = it->second;
        std::snprintf(buf, sizeof(buf), "%-16s %6d %9.2f (%5.2f) %10.2f (%5.2f) %9.4f (%6.4f)\n",
                      method.c_str(), a.count, a.mae_mean, a.mae_std, a.psnr_mean, a.psnr_std,
                      a.ssim_mean, a.ssim_std);
        os << buf;
    }
    return os.str();
}

}  // namespace ringrec
