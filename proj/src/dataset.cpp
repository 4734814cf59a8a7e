#include "bvselect/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bvselect/error.hpp"

namespace bvs {

Dataset::Dataset(std::vector<std::string> names, Eigen::MatrixXd values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols())
        throw DataError("dataset has " + std::to_string(names_.size()) + " names but " +
                        std::to_string(values_.cols()) + " columns");
    if (values_.rows() < 1) throw DataError("dataset has no rows");
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw DataError("duplicate column name '" + names_[i] + "'");
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

Eigen::VectorXd Dataset::column(std::string_view name) const {
    auto idx = find(name);
    if (!idx) throw DataError("unknown column '" + std::string(name) + "'");
    return values_.col(static_cast<Eigen::Index>(*idx));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

struct Record {
    std::vector<std::string> fields;
    std::size_t line;
};

// RFC-4180 tokenizer: quoted fields may contain commas, doubled quotes and newlines.
std::vector<Record> tokenize(std::string_view text, const std::string& origin) {
    std::vector<Record> records;
    Record cur{{}, 1};
    std::string field;
    std::size_t line = 1;
    bool in_quotes = false, field_started = false, quoted_field = false;

    auto end_field = [&] {
        cur.fields.push_back(field);
        field.clear();
        field_started = quoted_field = false;
    };
    auto end_record = [&] {
        end_field();
        bool blank = cur.fields.size() == 1 && cur.fields[0].empty();
        if (!blank) records.push_back(std::move(cur));
        cur = Record{{}, line + 1};
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty())
                    throw DataError(origin + ": line " + std::to_string(line) + ": stray quote inside field");
                in_quotes = quoted_field = field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) throw DataError(origin + ": unterminated quoted field");
    if (field_started || !cur.fields.empty()) end_record();
    return records;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    out = std::strtod(begin, &end);
    return end == begin + s.size() && errno != ERANGE;
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "NaN" || s == "nan"; }

}  // namespace

Dataset parse_csv(std::string_view text, const std::string& origin) {
    auto records = tokenize(text, origin);
    if (records.empty()) throw DataError(origin + ": empty file, header row required");
    std::vector<std::string> names;
    for (auto& f : records.front().fields) names.push_back(trim(f));
    for (const auto& n : names)
        if (n.empty()) throw DataError(origin + ": empty column name in header");

    const std::size_t k = names.size();
    const std::size_t n = records.size() - 1;
    if (n == 0) throw DataError(origin + ": no data rows");

    std::vector<std::vector<std::string>> cells(k, std::vector<std::string>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto& rec = records[r + 1];
        if (rec.fields.size() != k)
            throw DataError(origin + ": line " + std::to_string(rec.line) + ": ragged row with " +
                            std::to_string(rec.fields.size()) + " fields, expected " + std::to_string(k));
        for (std::size_t c = 0; c < k; ++c) {
            cells[c][r] = trim(rec.fields[c]);
            if (is_missing(cells[c][r]))
                throw DataError(origin + ": line " + std::to_string(rec.line) + ": missing value in column '" +
                                names[c] + "'");
        }
    }

    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> nums(n);
        bool numeric = true;
        for (std::size_t r = 0; r < n && numeric; ++r) numeric = parse_number(cells[c][r], nums[r]);
        if (numeric) {
            for (std::size_t r = 0; r < n; ++r) values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = nums[r];
            continue;
        }
        // Categorical: labels in order of first appearance; the first maps to 0.
        std::vector<std::string> labels;
        for (const auto& s : cells[c])
            if (std::find(labels.begin(), labels.end(), s) == labels.end()) labels.push_back(s);
        if (labels.size() > 2)
            throw DataError(origin + ": column '" + names[c] + "' has " + std::to_string(labels.size()) +
                            " distinct labels; factors with more than two levels are not supported");
        for (std::size_t r = 0; r < n; ++r)
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cells[c][r] == labels[0] ? 0.0 : 1.0;
    }
    return Dataset(std::move(names), std::move(values));
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    Dataset ds = parse_csv(text, path.string());
    ds.set_source(path.string(), fnv1a(text));
    return ds;
}

}  // namespace bvs
