#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringrec/geometry.hpp"
#include "ringrec/model.hpp"
#include "ringrec/synthesis.hpp"

namespace ringrec {

struct MetricRow {
    std::string sample_id;
    std::string method;
    double mae_hu = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

struct MethodAggregate {
    double mae_mean = 0, mae_std = 0;
    double psnr_mean = 0, psnr_std = 0;
    double ssim_mean = 0, ssim_std = 0;
    int count = 0;
};

struct MetricReport {
    std::vector<MetricRow> rows;
    std::vector<std::string> methods;  // evaluation order
    std::map<std::string, MethodAggregate> aggregate() const;
};

struct BaselineParams {
    int norm_window = 9;
    int wavefft_levels = 4;
    double wavefft_sigma = 2.0;
    std::string wavefft_wavelet = "db2";
};

// Reconstructs one corrupted sinogram with a named method:
//   fbp | norm | wavefft | synthrar[:mode]
// synthrar methods pick the checkpoint whose mode matches (errors if absent).
Grid2D reconstruct_with(const std::string& method, const Grid2D& y, const FanBeamGeometry& g,
                        const std::vector<UnrolledModel>& models, const BaselineParams& bp);

// Runs every method over every sample; metrics in HU inside the inscribed
// circle. data_range defaults to max-min of the ground truth inside the
// circle, per sample.
MetricReport evaluate(const std::vector<TrainingSample>& samples, const FanBeamGeometry& g,
                      const std::vector<std::string>& methods,
                      const std::vector<UnrolledModel>& models, const BaselineParams& bp,
                      std::optional<double> data_range = std::nullopt);

// CSV columns: sample_id, method, mae_hu, psnr_db, ssim (inf serialized as
// "inf").
void write_metrics_csv(const MetricReport& report, const std::filesystem::path& path);
std::string format_metrics_table(const MetricReport& report);

}  // namespace ringrec
