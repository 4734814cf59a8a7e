#pragma once
#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bvs {

/** A column-named numeric table: the response and raw covariates of a linear model.
 *
 * Columns all have length n >= 1 and contain no missing values. Two-level categorical
 * columns are stored as a single 0/1 dummy.
 */
class Dataset {
  public:
    Dataset(std::vector<std::string> names, Eigen::MatrixXd values);

    std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const Eigen::MatrixXd& values() const { return values_; }

    std::optional<std::size_t> find(std::string_view name) const;
    /// Column by name; throws DataError when absent.
    Eigen::VectorXd column(std::string_view name) const;

    /// FNV-1a digest of the source bytes, 0 for in-memory tables.
    std::uint64_t checksum() const { return checksum_; }
    const std::string& source() const { return source_; }
    void set_source(std::string path, std::uint64_t checksum) {
        source_ = std::move(path);
        checksum_ = checksum;
    }

  private:
    std::vector<std::string> names_;
    Eigen::MatrixXd values_;
    std::string source_;
    std::uint64_t checksum_ = 0;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);

/// Parses CSV text (header row required). `origin` only labels error messages.
Dataset parse_csv(std::string_view text, const std::string& origin = "<memory>");

/// Reads and parses a CSV file; records path and checksum on the result.
Dataset load_csv(const std::filesystem::path& path);

}  // namespace bvs
