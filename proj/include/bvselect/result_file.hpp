#pragma once
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bvselect/explore.hpp"

namespace bvs {

inline constexpr int kResultFormatVersion = 1;

struct DataFingerprint {
    std::string path;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t checksum = 0;
};

/** Persisted exploration result.
 *
 * Text layout: `key=value` header lines, then `[section]` blocks holding CSV tables
 * (top_models, inclusion, joint, dimension, visits), and a final `checksum=` line with the
 * FNV-1a digest of everything before it. Doubles are written with 17 significant digits so a
 * reload reproduces them exactly.
 */
struct ResultFile {
    ExploreResult result;
    std::string formula;
    std::optional<std::vector<std::string>> fixed;  ///< std::nullopt stands for an empty X0
    DataFingerprint data;
};

std::string format_result(const ResultFile& rf);
/// Validates format version and checksum; throws Error on any mismatch.
ResultFile parse_result(std::string_view text);

void save_result(const ResultFile& rf, const std::filesystem::path& path);
ResultFile load_result(const std::filesystem::path& path);

/** Reloads the dataset named in the fingerprint and rebuilds the sufficient statistics needed
 * for model averaging. A changed dataset yields a warning; a design that no longer matches the
 * stored names is an error.
 */
void attach_context(ResultFile& rf, std::vector<std::string>& warnings);

/// Hex digest of a result file's content, used as a provenance id.
std::string result_id(const ResultFile& rf);

}  // namespace bvs
