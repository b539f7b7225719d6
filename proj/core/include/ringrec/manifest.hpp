#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ringrec {

struct ManifestSample {
    std::string source;   // "phantom:<n>" or a PGM path
    uint64_t seed = 0;    // RNG stream id used for this sample
    std::string x_path;   // clean attenuation image (SRF1)
    std::string y_path;   // corrupted sinogram (SRF1)
    std::string ir_path;  // per-detector response vector, 1 x D (SRF1)
    std::string im_path;  // per-detector validity mask, 1 x D (SRF1)
};

// Records everything needed to reproduce a generated dataset bit-exactly:
// the geometry preset, the corruption parameters, and one seed per sample.
// Serialized as JSON; unknown fields are ignored on read.
struct DatasetManifest {
    std::string geometry_id;
    uint64_t base_seed = 0;
    double ir_fraction = 0.75;
    double im_fraction = 0.02;
    double ir_lo = 0.75;
    double ir_hi = 1.25;
    double mu_lo = 0.5;
    double mu_hi = 0.7;
    int augment = 10;
    std::vector<ManifestSample> samples;

    void save(const std::filesystem::path& path) const;
    static DatasetManifest load(const std::filesystem::path& path);
};

}  // namespace ringrec
