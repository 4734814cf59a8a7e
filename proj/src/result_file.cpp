#include "bvselect/result_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bvselect/dataset.hpp"
#include "bvselect/design.hpp"
#include "bvselect/error.hpp"
#include "bvselect/formula.hpp"

namespace bvs {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void check_name(const std::string& name) {
    if (name.find_first_of(",=\n\r[]") != std::string::npos)
        throw DataError("name '" + name + "' cannot be stored in a result file");
}

double to_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw Error("result file: bad number '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& s, int base = 10) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("result file: bad integer '" + s + "'");
    return v;
}

ModelId parse_bits(const std::string& s, std::size_t p) {
    if (s.size() != p) throw Error("result file: model '" + s + "' has wrong length");
    ModelId m;
    for (std::size_t i = 0; i < p; ++i) {
        if (s[i] != '0' && s[i] != '1') throw Error("result file: bad model '" + s + "'");
        m = m.with(i, s[i] == '1');
    }
    return m;
}

std::string prior_kind(const ModelPriorSpec& s) {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ModelPriorSpec::Constant>) return "Constant";
            if constexpr (std::is_same_v<T, ModelPriorSpec::ScottBerger>) return "ScottBerger";
            if constexpr (std::is_same_v<T, ModelPriorSpec::UserDims>) return "User";
            if constexpr (std::is_same_v<T, ModelPriorSpec::ThetaFixed>) return "Theta";
            if constexpr (std::is_same_v<T, ModelPriorSpec::BetaBinomial>) return "BetaBinomial";
        },
        s.kind);
}

std::string prior_args(const ModelPriorSpec& s) {
    if (auto* u = std::get_if<ModelPriorSpec::UserDims>(&s.kind)) {
        std::vector<std::string> xs;
        for (double w : u->weights) xs.push_back(fmt_double(w));
        return join(xs);
    }
    if (auto* t = std::get_if<ModelPriorSpec::ThetaFixed>(&s.kind)) return fmt_double(t->theta);
    if (auto* b = std::get_if<ModelPriorSpec::BetaBinomial>(&s.kind)) return fmt_double(b->b);
    return "";
}

ModelPriorSpec make_prior(const std::string& kind, const std::string& args) {
    if (kind == "Constant") return ModelPriorSpec::constant();
    if (kind == "ScottBerger") return ModelPriorSpec::scott_berger();
    if (kind == "User") {
        std::vector<double> w;
        for (const auto& x : split(args, ',')) w.push_back(to_double(x));
        return ModelPriorSpec::user(std::move(w));
    }
    if (kind == "Theta") return ModelPriorSpec::theta(to_double(args));
    if (kind == "BetaBinomial") return ModelPriorSpec::beta_binomial(to_double(args));
    throw Error("result file: unknown model prior '" + kind + "'");
}

std::string body(const ResultFile& rf) {
    const ExploreResult& r = rf.result;
    for (const auto& n : r.names0) check_name(n);
    for (const auto& n : r.names) check_name(n);
    if (rf.fixed)
        for (const auto& n : *rf.fixed) check_name(n);
    const std::size_t p = r.p();
    std::ostringstream os;
    os << "# bvselect result file\n";
    os << "format=bvselect-result\n";
    os << "version=" << kResultFormatVersion << "\n";
    os << "method=" << (r.method == Method::Exact ? "exact" : "gibbs") << "\n";
    os << "formula=" << rf.formula << "\n";
    os << "fixed_cov=" << (rf.fixed ? join(*rf.fixed) : std::string("NONE")) << "\n";
    os << "data_path=" << rf.data.path << "\n";
    os << "data_rows=" << rf.data.rows << "\n";
    os << "data_cols=" << rf.data.cols << "\n";
    os << "data_checksum=" << hex(rf.data.checksum) << "\n";
    os << "prior_betas=" << to_string(r.bfspec.variant) << "\n";
    os << "prior_betas_g=" << fmt_double(r.bfspec.g) << "\n";
    os << "prior_models=" << prior_kind(r.mpspec) << "\n";
    os << "prior_models_args=" << prior_args(r.mpspec) << "\n";
    os << "n=" << r.n << "\n";
    os << "p0=" << r.p0() << "\n";
    os << "p=" << p << "\n";
    os << "names0=" << join(r.names0) << "\n";
    os << "names=" << join(r.names) << "\n";
    os << "n_keep=" << r.n_keep << "\n";
    os << "skipped_models=" << r.skipped_models << "\n";
    os << "joint=" << (r.acc.has_joint() ? 1 : 0) << "\n";
    if (r.method == Method::Gibbs) {
        os << "seed=" << r.seed << "\n";
        os << "init=" << r.init << "\n";
        os << "burnin=" << r.burnin << "\n";
        os << "iterations=" << r.iterations << "\n";
        os << "thin=" << r.thin << "\n";
        os << "retained=" << r.retained << "\n";
    }
    os << "log_scale=" << fmt_double(r.acc.log_scale) << "\n";
    os << "total=" << fmt_double(r.acc.total) << "\n";

    os << "[top_models]\nrank,model,log_mass,prob\n";
    for (std::size_t k = 0; k < r.top.size(); ++k)
        os << k + 1 << "," << r.top[k].model.to_bitstring(p) << "," << fmt_double(r.top[k].log_mass) << ","
           << fmt_double(r.posterior(r.top[k])) << "\n";
    os << "[inclusion]\nname,mass\n";
    for (std::size_t i = 0; i < p; ++i) os << r.names[i] << "," << fmt_double(r.acc.incl[i]) << "\n";
    if (r.acc.has_joint()) {
        os << "[joint]\n";
        for (std::size_t i = 0; i < p; ++i) os << "," << r.names[i];
        os << "\n";
        for (std::size_t i = 0; i < p; ++i) {
            os << r.names[i];
            for (std::size_t j = 0; j < p; ++j)
                os << "," << fmt_double(r.acc.joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            os << "\n";
        }
    }
    os << "[dimension]\ncandidates,mass\n";
    for (std::size_t k = 0; k < r.acc.dim.size(); ++k) os << k << "," << fmt_double(r.acc.dim[k]) << "\n";
    if (r.method == Method::Gibbs) {
        os << "[visits]\nmodel,count\n";
        for (const auto& v : r.visits) os << v.model.to_bitstring(p) << "," << v.count << "\n";
    }
    return os.str();
}

}  // namespace

std::string format_result(const ResultFile& rf) {
    std::string b = body(rf);
    return b + "checksum=" + hex(fnv1a(b)) + "\n";
}

std::string result_id(const ResultFile& rf) { return hex(fnv1a(body(rf))); }

ResultFile parse_result(std::string_view text) {
    const auto pos = text.rfind("checksum=");
    if (pos == std::string_view::npos || (pos > 0 && text[pos - 1] != '\n'))
        throw Error("result file: missing checksum line");
    const std::string_view content = text.substr(0, pos);
    std::string stored(text.substr(pos + 9));
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
    if (stored != hex(fnv1a(content))) throw Error("result file: checksum mismatch (file is corrupted or was edited)");

    std::map<std::string, std::string> kv;
    std::map<std::string, std::vector<std::string>> sections;
    std::string current;
    for (auto& line : split(content, '\n')) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            current = line.substr(1, line.size() - 2);
            sections[current];
            continue;
        }
        if (!current.empty()) {
            sections[current].push_back(line);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("result file: malformed header line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error("result file: missing key '" + key + "'");
        return it->second;
    };
    if (get("format") != "bvselect-result") throw Error("result file: unknown format");
    if (to_u64(get("version")) != static_cast<std::uint64_t>(kResultFormatVersion))
        throw Error("result file: unsupported format version " + get("version"));

    ResultFile rf;
    ExploreResult& r = rf.result;
    const std::string method = get("method");
    if (method != "exact" && method != "gibbs") throw Error("result file: unknown method '" + method + "'");
    r.method = method == "exact" ? Method::Exact : Method::Gibbs;
    rf.formula = get("formula");
    if (get("fixed_cov") != "NONE") rf.fixed = split(get("fixed_cov"), ',');
    rf.data = {get("data_path"), to_u64(get("data_rows")), to_u64(get("data_cols")), to_u64(get("data_checksum"), 16)};
    r.bfspec = {parse_gprior(get("prior_betas")), to_double(get("prior_betas_g"))};
    r.mpspec = make_prior(get("prior_models"), get("prior_models_args"));
    r.n = to_u64(get("n"));
    r.names0 = split(get("names0"), ',');
    r.names = split(get("names"), ',');
    const std::size_t p = r.p();
    if (to_u64(get("p")) != p || to_u64(get("p0")) != r.p0()) throw Error("result file: inconsistent dimensions");
    r.n_keep = to_u64(get("n_keep"));
    r.skipped_models = to_u64(get("skipped_models"));
    const bool joint = get("joint") == "1";
    if (r.method == Method::Gibbs) {
        r.seed = to_u64(get("seed"));
        r.init = get("init");
        r.burnin = to_u64(get("burnin"));
        r.iterations = to_u64(get("iterations"));
        r.thin = to_u64(get("thin"));
        r.retained = to_u64(get("retained"));
    }
    r.acc = Accumulators(p, joint);
    r.acc.log_scale = to_double(get("log_scale"));
    r.acc.total = to_double(get("total"));

    auto rows = [&](const std::string& name) {
        auto it = sections.find(name);
        if (it == sections.end()) throw Error("result file: missing section [" + name + "]");
        std::vector<std::vector<std::string>> out;
        for (std::size_t i = 1; i < it->second.size(); ++i) out.push_back(split(it->second[i], ','));
        return out;
    };
    for (const auto& row : rows("top_models")) {
        if (row.size() != 4) throw Error("result file: malformed top_models row");
        r.top.push_back({parse_bits(row[1], p), to_double(row[2])});
    }
    auto incl = rows("inclusion");
    if (incl.size() != p) throw Error("result file: inclusion table has wrong length");
    for (std::size_t i = 0; i < p; ++i) {
        if (incl[i].size() != 2 || incl[i][0] != r.names[i]) throw Error("result file: malformed inclusion row");
        r.acc.incl[i] = to_double(incl[i][1]);
    }
    if (joint) {
        auto jr = rows("joint");
        if (jr.size() != p) throw Error("result file: joint table has wrong size");
        for (std::size_t i = 0; i < p; ++i) {
            if (jr[i].size() != p + 1) throw Error("result file: malformed joint row");
            for (std::size_t j = 0; j < p; ++j)
                r.acc.joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(jr[i][j + 1]);
        }
    }
    auto dim = rows("dimension");
    if (dim.size() != p + 1) throw Error("result file: dimension table has wrong length");
    for (std::size_t k = 0; k <= p; ++k) r.acc.dim[k] = to_double(dim[k].at(1));
    if (r.method == Method::Gibbs) {
        std::uint64_t sum = 0;
        for (const auto& row : rows("visits")) {
            if (row.size() != 2) throw Error("result file: malformed visits row");
            r.visits.push_back({parse_bits(row[0], p), to_u64(row[1])});
            sum += r.visits.back().count;
        }
        if (sum != r.retained) throw Error("result file: visit counts do not add up to the retained draws");
    }
    return rf;
}

void save_result(const ResultFile& rf, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << format_result(rf);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

ResultFile load_result(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open result file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_result(buf.str());
}

void attach_context(ResultFile& rf, std::vector<std::string>& warnings) {
    Dataset ds = load_csv(rf.data.path);
    if (ds.checksum() != rf.data.checksum || ds.rows() != rf.data.rows || ds.cols() != rf.data.cols)
        warnings.push_back("data file '" + rf.data.path + "' changed since the result was written");
    DesignSplit d = build_design(ds, parse_formula(rf.formula), rf.fixed);
    if (d.names0 != rf.result.names0 || d.names != rf.result.names)
        throw Error("design rebuilt from '" + rf.data.path + "' does not match the result file");
    rf.result.stats = std::make_shared<const SuffStats>(precompute(d));
}

}  // namespace bvs
