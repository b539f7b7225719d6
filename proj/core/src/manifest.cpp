#include "ringrec/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "ringrec/grid.hpp"

namespace ringrec {

using nlohmann::json;

void DatasetManifest::save(const std::filesystem::path& path) const {
    json j;
    j["geometry_id"] = geometry_id;
    j["base_seed"] = base_seed;
    j["ir_fraction"] = ir_fraction;
    j["im_fraction"] = im_fraction;
    j["ir_range"] = {ir_lo, ir_hi};
    j["mu_range"] = {mu_lo, mu_hi};
    j["augment"] = augment;
    json arr = json::array();
    for (const auto& s : samples) {
        arr.push_back({{"source", s.source},
                       {"seed", s.seed},
                       {"x", s.x_path},
                       {"y", s.y_path},
                       {"ir", s.ir_path},
                       {"im", s.im_path}});
    }
    j["samples"] = std::move(arr);

    std::ofstream f(path, std::ios::trunc);
    if (!f) fail("manifest: cannot open " + path.string() + " for writing");
    f << j.dump(2) << "\n";
    if (!f) fail("manifest: I/O failure writing " + path.string());
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) fail("manifest: cannot open " + path.string());
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        fail("manifest: JSON parse error in " + path.string() + ": " + e.what());
    }

    DatasetManifest m;
    try {
        m.geometry_id = j.at("geometry_id").get<std::string>();
        m.base_seed = j.value("base_seed", uint64_t{0});
        m.ir_fraction = j.value("ir_fraction", 0.75);
        m.im_fraction = j.value("im_fraction", 0.02);
        if (j.contains("ir_range")) {
            m.ir_lo = j["ir_range"].at(0).get<double>();
            m.ir_hi = j["ir_range"].at(1).get<double>();
        }
        if (j.contains("mu_range")) {
            m.mu_lo = j["mu_range"].at(0).get<double>();
            m.mu_hi = j["mu_range"].at(1).get<double>();
        }
        m.augment = j.value("augment", 10);
        for (const auto& e : j.at("samples")) {
            ManifestSample s;
            s.source = e.at("source").get<std::string>();
            s.seed = e.at("seed").get<uint64_t>();
            s.x_path = e.at("x").get<std::string>();
            s.y_path = e.at("y").get<std::string>();
            s.ir_path = e.at("ir").get<std::string>();
            s.im_path = e.at("im").get<std::string>();
            m.samples.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        fail("manifest: missing or malformed field in " + path.string() + ": " + e.what());
    }
    return m;
}

}  // namespace ringrec
