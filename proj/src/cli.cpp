#include "bvselect/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "bvselect/bma.hpp"
#include "bvselect/dataset.hpp"
#include "bvselect/design.hpp"
#include "bvselect/error.hpp"
#include "bvselect/formula.hpp"
#include "bvselect/result_file.hpp"
#include "bvselect/svg.hpp"

namespace bvs::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        auto b = cur.find_first_not_of(" \t");
        auto e = cur.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw UsageError("invalid number '" + s + "' in " + what);
    return v;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Options shared by bvs, pbvs and gibbs.
struct ExploreArgs {
    std::string formula, data, fixed_cov = kInterceptName, out, out_dir = ".";
    std::size_t n_keep = 10;
    std::string prior_betas = "Robust", prior_models = "ScottBerger", priorprobs;
    std::optional<double> theta, wstar, b;
    bool no_joint = false;
};

void add_explore_options(CLI::App* sc, ExploreArgs& a) {
    sc->add_option("--formula", a.formula, "model formula, e.g. \"y~x1+x2\" or \"y~.\"")->required();
    sc->add_option("--data", a.data, "CSV file with a header row")->required();
    sc->add_option("--fixed-cov", a.fixed_cov, "comma list of covariates in every model, or NULL")
        ->capture_default_str();
    sc->add_option("--n-keep", a.n_keep, "number of top models kept")->capture_default_str()->check(CLI::PositiveNumber);
    sc->add_option("--prior-betas", a.prior_betas, "Robust|ZellnerSiow|gZellner|FLS|Liangetal")
        ->capture_default_str()
        ->check(CLI::IsMember({"Robust", "ZellnerSiow", "gZellner", "FLS", "Liangetal"}));
    sc->add_option("--prior-models", a.prior_models, "Constant|ScottBerger|User|Theta|BetaBinomial")
        ->capture_default_str()
        ->check(CLI::IsMember({"Constant", "ScottBerger", "User", "Theta", "BetaBinomial"}));
    sc->add_option("--priorprobs", a.priorprobs, "p+1 dimension weights: a comma list or a file");
    sc->add_option("--theta", a.theta, "inclusion probability for --prior-models Theta");
    sc->add_option("--wstar", a.wstar, "prior expected model size for --prior-models BetaBinomial");
    sc->add_option("--b", a.b, "second beta parameter for --prior-models BetaBinomial")->excludes("--wstar");
    sc->add_flag("--no-joint", a.no_joint, "skip the pairwise inclusion accumulators");
    sc->add_option("--out", a.out, "result file path (default <out-dir>/<command>.result)");
    sc->add_option("--out-dir", a.out_dir, "directory for output files")->capture_default_str();
}

std::optional<std::vector<std::string>> parse_fixed(const std::string& s) {
    if (s == "NULL" || s == "NONE" || s.empty()) return std::nullopt;
    return split(s, ',');
}

std::vector<double> parse_weights(const std::string& s) {
    std::string text = s;
    if (fs::exists(s)) text = read_file(s);
    std::vector<double> w;
    std::string tok;
    for (char& c : text)
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t' || c == ';') c = ',';
    for (const auto& t : split(text, ','))
        if (!t.empty()) w.push_back(parse_number(t, "--priorprobs"));
    return w;
}

ModelPriorSpec model_prior(const ExploreArgs& a, std::size_t p) {
    if (a.prior_models == "Constant") return ModelPriorSpec::constant();
    if (a.prior_models == "ScottBerger") return ModelPriorSpec::scott_berger();
    if (a.prior_models == "User") {
        if (a.priorprobs.empty()) throw UsageError("--prior-models User needs --priorprobs");
        auto w = parse_weights(a.priorprobs);
        if (w.size() != p + 1)
            throw UsageError("--priorprobs needs " + std::to_string(p + 1) + " values, got " + std::to_string(w.size()));
        return ModelPriorSpec::user(std::move(w));
    }
    if (a.prior_models == "Theta") {
        if (!a.theta) throw UsageError("--prior-models Theta needs --theta");
        return ModelPriorSpec::theta(*a.theta);
    }
    if (a.b) return ModelPriorSpec::beta_binomial(*a.b);
    if (!a.wstar) throw UsageError("--prior-models BetaBinomial needs --wstar or --b");
    return ModelPriorSpec::beta_binomial_wstar(*a.wstar, p);
}

struct Loaded {
    Dataset ds;
    DesignSplit design;
    Problem prob;
};

Loaded load_problem(const ExploreArgs& a) {
    Dataset ds = load_csv(a.data);
    DesignSplit d = build_design(ds, parse_formula(a.formula), parse_fixed(a.fixed_cov));
    ModelPriorSpec mp = model_prior(a, d.p());
    Problem prob = Problem::from_design(d, parse_gprior(a.prior_betas), std::move(mp));
    return {std::move(ds), std::move(d), std::move(prob)};
}

void preamble(std::ostream& err, const Problem& prob, std::size_t n_keep, bool gibbs) {
    err << "Info. . . .\n";
    err << "Most complex model has " << prob.p0() + prob.p() << " covariates\n";
    err << "From those " << prob.p0() << " are fixed and we should select from the remaining " << prob.p() << "\n";
    for (std::size_t i = 0; i < prob.names.size(); ++i) err << (i ? ", " : "") << prob.names[i];
    err << "\n";
    if (prob.p() < 64) {
        err << "The problem has a total of " << (std::uint64_t{1} << prob.p()) << " competing models\n";
    } else {
        err << "The problem has a total of 2^" << prob.p() << " competing models\n";
    }
    if (gibbs)
        err << "Of these, the " << n_keep << " most visited are kept\n";
    else
        err << "Of these, the " << n_keep << " most probable (a posteriori) are kept\n";
}

fs::path out_path(const ExploreArgs& a, const std::string& cmd) {
    if (!a.out.empty()) return a.out;
    fs::create_directories(a.out_dir);
    return fs::path(a.out_dir) / (cmd + ".result");
}

void finish_explore(const ExploreArgs& a, const Loaded& l, ExploreResult r, const std::string& cmd, std::ostream& out,
                    std::ostream& err) {
    if (r.skipped_models > 0)
        err << "warning: " << r.skipped_models << " models were singular or too large for n and got probability 0\n";
    out << format_top_models(r);
    if (r.method == Method::Gibbs && !r.top.empty()) {
        out << "Among the visited models, the model with the largest probability contains:\n";
        const auto& idx = r.top.front().model.indices();
        for (std::size_t k = 0; k < idx.size(); ++k) out << (k ? " " : "") << r.names[idx[k]];
        out << "\n";
    }
    ResultFile rf;
    rf.result = std::move(r);
    rf.formula = a.formula;
    rf.fixed = parse_fixed(a.fixed_cov);
    rf.data = {a.data, l.ds.rows(), l.ds.cols(), l.ds.checksum()};
    const fs::path path = out_path(a, cmd);
    save_result(rf, path);
    err << "result written to " << path.string() << "\n";
}

ModelId parse_model_bits(const std::string& s, std::size_t p) {
    if (s.size() != p || s.find_first_not_of("01") != std::string::npos)
        throw UsageError("--init expects null, full, random or a 0/1 string of length " + std::to_string(p));
    ModelId m;
    for (std::size_t i = 0; i < p; ++i) m = m.with(i, s[i] == '1');
    return m;
}

// Reads a sample CSV written by bma-coef, skipping '#' comment lines.
BmaSamples read_samples(const fs::path& path) {
    std::string text = read_file(path), body;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.empty() || line[0] != '#') body += line + "\n";
    Dataset ds = parse_csv(body, path.string());
    return {ds.names(), ds.values(), {}};
}

std::string samples_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& draws,
                        const std::string& comment) {
    std::ostringstream os;
    os << "# " << comment << "\n";
    for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << csv_field(names[j]);
    os << "\n";
    for (Eigen::Index i = 0; i < draws.rows(); ++i) {
        for (Eigen::Index j = 0; j < draws.cols(); ++j) os << (j ? "," : "") << fmt("%.17g", draws(i, j));
        os << "\n";
    }
    return os.str();
}

std::string provenance_line(const std::string& cmd, const BmaProvenance& p) {
    std::ostringstream os;
    os << "bvselect " << cmd << " n_sim=" << p.n_sim << " seed=" << p.seed << " models_used=" << p.models_used
       << " accumulated_probability=" << fmt("%.6f", p.accumulated_probability) << " weighting=" << p.weighting
       << " partitions=1 source=" << p.source;
    return os.str();
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::string quantile_table(const std::vector<std::string>& names, const Eigen::MatrixXd& draws) {
    std::size_t w = 8;
    for (const auto& n : names) w = std::max(w, n.size() + 1);
    std::ostringstream os;
    os << pad_right("", w) << pad_left("5%", 12) << pad_left("50%", 12) << pad_left("95%", 12) << "\n";
    for (std::size_t j = 0; j < names.size(); ++j) {
        const Eigen::VectorXd c = draws.col(static_cast<Eigen::Index>(j));
        std::vector<double> v(c.data(), c.data() + c.size());
        os << pad_right(names[j], w);
        for (double q : {0.05, 0.5, 0.95}) os << pad_left(fmt("%.4f", quantile(v, q)), 12);
        os << "\n";
    }
    return os.str();
}

void print_warnings(std::ostream& err, const std::vector<std::string>& ws) {
    for (const auto& w : ws) err << "warning: " << w << "\n";
}

std::size_t default_workers() {
    if (const char* env = std::getenv("BVSELECT_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (*env && *end == '\0' && v > 0) return v;
        throw UsageError("BVSELECT_WORKERS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::string format_top_models(const ExploreResult& r) {
    const bool gibbs = r.method == Method::Gibbs;
    std::ostringstream os;
    os << "The " << r.top.size() << (gibbs ? " most visited models and their frequencies are:\n"
                                           : " most probable models and their probabilities are:\n");
    const std::string rank_head = std::to_string(r.top.size());
    const std::size_t rw = std::max<std::size_t>(rank_head.size(), 1);
    os << std::string(rw, ' ');
    for (const auto& n : r.names) os << " " << n;
    os << "        prob\n";
    for (std::size_t k = 0; k < r.top.size(); ++k) {
        os << pad_right(std::to_string(k + 1), rw);
        for (std::size_t i = 0; i < r.p(); ++i)
            os << " " << pad_left(r.top[k].model.test(i) ? "*" : "", r.names[i].size());
        os << " " << fmt("%.9f", r.posterior(r.top[k])) << "\n";
    }
    return os.str();
}

std::string format_summary(const SummaryReport& s) {
    std::size_t w = 4;
    for (const auto& n : s.names) w = std::max(w, n.size() + 1);
    std::ostringstream os;
    os << "Inclusion Probabilities:\n";
    os << pad_right("", w) << " Incl.prob. HPM MPM\n";
    for (std::size_t i = 0; i < s.names.size(); ++i) {
        os << pad_right(s.names[i], w) << pad_left(fmt("%.4f", s.inclusion[i]), 11) << pad_left(s.hpm.test(i) ? "*" : "", 4)
           << pad_left(s.mpm.test(i) ? "*" : "", 4) << "\n";
    }
    os << "---\nPosterior of the model dimension (fixed covariates included):\n";
    for (std::size_t k = 0; k < s.dimension.size(); ++k)
        os << pad_left(std::to_string(s.p0 + k), 4) << " " << fmt("%.6f", s.dimension[k]) << "\n";
    return os.str();
}

std::string format_btest(const BtestResult& b) {
    std::ostringstream os;
    os << "Bayes factors (expressed in relation to " << b.null_name << ")\n";
    std::vector<std::string> heads, vals, pheads, pvals;
    for (std::size_t i = 0; i < b.names.size(); ++i) {
        heads.push_back(b.names[i] + ".to." + b.null_name);
        vals.push_back(fmt("%.7f", b.bayes_factors[i]));
        pheads.push_back(b.names[i]);
        pvals.push_back(fmt("%.3f", b.posterior[i]));
    }
    auto row = [&](const std::vector<std::string>& h, const std::vector<std::string>& v) {
        std::string l1, l2;
        for (std::size_t i = 0; i < h.size(); ++i) {
            const std::size_t w = std::max(h[i].size(), v[i].size());
            l1 += (i ? " " : "") + pad_left(h[i], w);
            l2 += (i ? " " : "") + pad_left(v[i], w);
        }
        os << l1 << "\n" << l2 << "\n";
    };
    row(heads, vals);
    os << "---------\nPosterior probabilities:\n";
    row(pheads, pvals);
    return os.str();
}

std::string format_jointness(const std::string& a, const std::string& b, const Jointness& j) {
    std::ostringstream os;
    os << "---------\nThe joint inclusion probability for " << a << " and " << b << " is: " << fmt("%.4f", j.joint)
       << "\n---------\nThe ratio between the probability of including both covariates and the probability\n"
          "of including at least one of them is: "
       << fmt("%.4f", j.vs_either)
       << "\n---------\nThe probability of including both covariates together is "
       << fmt("%.4f", j.vs_one_alone) << " times the probability\nof including one of them alone\n";
    return os.str();
}

std::string matrix_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& m) {
    std::ostringstream os;
    for (const auto& l : labels) os << "," << csv_field(l);
    os << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << csv_field(labels[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << "," << (std::isnan(m(i, j)) ? "NaN" : fmt("%.10g", m(i, j)));
        os << "\n";
    }
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Objective Bayesian hypothesis testing and variable selection for linear models", "bvselect"};
    app.require_subcommand(1);

    // btest
    auto* c_btest = app.add_subcommand("btest", "test a set of named nested hypotheses");
    std::string bt_data, bt_prior_betas = "Robust", bt_priorprobs;
    std::vector<std::string> bt_models;
    bool bt_relax = false;
    c_btest->add_option("--data", bt_data, "CSV file")->required();
    c_btest->add_option("--model", bt_models, "NAME=FORMULA, repeatable")->required()->take_all();
    c_btest->add_option("--priorprobs", bt_priorprobs, "NAME=W,NAME=W,... (default: equal)");
    c_btest->add_option("--prior-betas", bt_prior_betas, "Robust|ZellnerSiow|gZellner|FLS|Liangetal")
        ->capture_default_str()
        ->check(CLI::IsMember({"Robust", "ZellnerSiow", "gZellner", "FLS", "Liangetal"}));
    c_btest->add_flag("--relax-nest", bt_relax, "take the null as the hypothesis with the largest SSE");

    // bvs / pbvs / gibbs
    ExploreArgs ea;
    std::size_t max_p = 25, workers = 0;
    bool force = false;
    auto* c_bvs = app.add_subcommand("bvs", "exact enumeration of the model space");
    auto* c_pbvs = app.add_subcommand("pbvs", "parallel exact enumeration");
    for (auto* sc : {c_bvs, c_pbvs}) {
        add_explore_options(sc, ea);
        sc->add_option("--max-p", max_p, "largest p enumerated without --force")->capture_default_str();
        sc->add_flag("--force", force, "enumerate even when p exceeds --max-p");
    }
    c_pbvs->add_option("--workers", workers, "worker threads (default $BVSELECT_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);

    auto* c_gibbs = app.add_subcommand("gibbs", "Gibbs sampling over the model space");
    add_explore_options(c_gibbs, ea);
    std::string g_init = "full";
    std::size_t g_burnin = 50, g_iter = 10000, g_thin = 1;
    std::optional<std::uint64_t> g_seed;
    c_gibbs->add_option("--init", g_init, "null|full|random|<0/1 string>")->capture_default_str();
    c_gibbs->add_option("--burnin", g_burnin, "discarded iterations")->capture_default_str();
    c_gibbs->add_option("--iter", g_iter, "iterations after burn-in")->capture_default_str()->check(CLI::PositiveNumber);
    c_gibbs->add_option("--thin", g_thin, "keep every thin-th draw")->capture_default_str()->check(CLI::PositiveNumber);
    c_gibbs->add_option("--seed", g_seed, "RNG seed (default: from OS entropy)");

    // summarize
    auto* c_sum = app.add_subcommand("summarize", "inclusion probabilities, HPM, MPM and matrices");
    std::string s_file, s_matrix, s_joint, s_svg;
    c_sum->add_option("result", s_file, "result file")->required();
    c_sum->add_option("--matrices", s_matrix, "joint|conditional|not|dimension")
        ->check(CLI::IsMember({"joint", "conditional", "not", "dimension"}));
    c_sum->add_option("--jointness", s_joint, "VAR1,VAR2");
    c_sum->add_option("--svg", s_svg, "write a plot to this path");

    // bma-coef
    auto* c_coef = app.add_subcommand("bma-coef", "model-averaged coefficient draws");
    std::string bc_file, bc_out;
    std::size_t bc_nsim = 10000;
    std::optional<std::uint64_t> bc_seed;
    c_coef->add_option("result", bc_file, "result file")->required();
    c_coef->add_option("--n-sim", bc_nsim, "number of draws")->capture_default_str()->check(CLI::PositiveNumber);
    c_coef->add_option("--seed", bc_seed, "RNG seed (default: from OS entropy)");
    c_coef->add_option("--out", bc_out, "CSV output (default <out-dir>/samples.csv)");
    std::string bc_out_dir = ".";
    c_coef->add_option("--out-dir", bc_out_dir, "directory for output files")->capture_default_str();

    // predict
    auto* c_pred = app.add_subcommand("predict", "model-averaged predictive draws");
    std::string pr_file, pr_new, pr_out, pr_out_dir = ".";
    std::size_t pr_nsim = 10000;
    std::optional<std::uint64_t> pr_seed;
    c_pred->add_option("result", pr_file, "result file")->required();
    c_pred->add_option("--newdata", pr_new, "CSV with the covariates of the new points")->required();
    c_pred->add_option("--n-sim", pr_nsim, "number of draws")->capture_default_str()->check(CLI::PositiveNumber);
    c_pred->add_option("--seed", pr_seed, "RNG seed (default: from OS entropy)");
    c_pred->add_option("--out", pr_out, "CSV output (default <out-dir>/predictions.csv)");
    c_pred->add_option("--out-dir", pr_out_dir, "directory for output files")->capture_default_str();

    // jointness
    auto* c_joint = app.add_subcommand("jointness", "jointness measures for one pair or all pairs");
    std::string j_file, j_cov = "All";
    c_joint->add_option("result", j_file, "result file")->required();
    c_joint->add_option("--covariates", j_cov, "VAR1,VAR2 or All")->capture_default_str();

    // hist
    auto* c_hist = app.add_subcommand("hist", "histogram data for one column of a sample CSV");
    std::string h_file, h_cov, h_out, h_svg;
    std::size_t h_breaks = 100;
    c_hist->add_option("samples", h_file, "CSV written by bma-coef")->required();
    c_hist->add_option("--covariate", h_cov, "column name")->required();
    c_hist->add_option("--breaks", h_breaks, "number of bins")->capture_default_str()->check(CLI::PositiveNumber);
    c_hist->add_option("--out", h_out, "CSV output (default: standard output)");
    c_hist->add_option("--svg", h_svg, "write a plot to this path");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    }

    try {
        if (c_btest->parsed()) {
            Dataset ds = load_csv(bt_data);
            HypothesisSet hs;
            hs.relax_nest = bt_relax;
            for (const auto& m : bt_models) {
                const auto eq = m.find('=');
                if (eq == std::string::npos || eq == 0) throw UsageError("--model expects NAME=FORMULA, got '" + m + "'");
                hs.models.emplace_back(m.substr(0, eq), parse_formula(m.substr(eq + 1)));
            }
            if (!bt_priorprobs.empty()) {
                for (const auto& kv : split(bt_priorprobs, ',')) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos) throw UsageError("--priorprobs expects NAME=W pairs");
                    hs.prior[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1), "--priorprobs");
                }
            }
            out << format_btest(btest(hs, ds, parse_gprior(bt_prior_betas)));
            return 0;
        }
        if (c_bvs->parsed() || c_pbvs->parsed()) {
            const bool parallel = c_pbvs->parsed();
            Loaded l = load_problem(ea);
            preamble(err, l.prob, ea.n_keep, false);
            EnumerateOptions opts{ea.n_keep, !ea.no_joint, max_p, force};
            ExploreResult r;
            if (parallel) {
                const std::size_t k = workers ? workers : default_workers();
                err << "workers: " << k << "\n";
                r = enumerate_parallel(l.prob, opts, k);
            } else {
                r = enumerate(l.prob, opts);
            }
            finish_explore(ea, l, std::move(r), parallel ? "pbvs" : "bvs", out, err);
            return 0;
        }
        if (c_gibbs->parsed()) {
            Loaded l = load_problem(ea);
            preamble(err, l.prob, ea.n_keep, true);
            GibbsOptions go;
            if (g_init == "null")
                go.init = GibbsOptions::Init::Null;
            else if (g_init == "full")
                go.init = GibbsOptions::Init::Full;
            else if (g_init == "random")
                go.init = GibbsOptions::Init::Random;
            else {
                go.init = GibbsOptions::Init::Explicit;
                go.explicit_model = parse_model_bits(g_init, l.prob.p());
            }
            go.burnin = g_burnin;
            go.iterations = g_iter;
            go.thin = g_thin;
            go.seed = g_seed ? *g_seed : entropy_seed();
            go.n_keep = ea.n_keep;
            go.joint = !ea.no_joint;
            err << "seed: " << go.seed << "\n";
            finish_explore(ea, l, gibbs(l.prob, go), "gibbs", out, err);
            return 0;
        }
        if (c_sum->parsed()) {
            ResultFile rf = load_result(s_file);
            const ExploreResult& r = rf.result;
            Warnings ws;
            if (!s_matrix.empty()) {
                Eigen::MatrixXd m;
                if (s_matrix == "dimension") {
                    const auto d = dimension_posterior(r);
                    out << "dimension,probability\n";
                    for (std::size_t k = 0; k < d.size(); ++k) out << r.p0() + k << "," << fmt("%.10g", d[k]) << "\n";
                    if (!s_svg.empty()) {
                        std::vector<std::string> labels;
                        for (std::size_t k = 0; k < d.size(); ++k) labels.push_back(std::to_string(r.p0() + k));
                        write_file(s_svg, svg::bar_chart(labels, d, "Posterior of the model dimension"));
                    }
                } else {
                    if (s_matrix == "joint")
                        m = joint_matrix(r);
                    else if (s_matrix == "conditional")
                        m = conditional_matrix(r, &ws);
                    else
                        m = not_matrix(r, &ws);
                    out << matrix_csv(r.names, m);
                    if (!s_svg.empty()) write_file(s_svg, svg::heatmap(r.names, m, s_matrix + " inclusion probabilities"));
                }
            } else {
                const SummaryReport s = summarize(r);
                out << format_summary(s);
                if (!s_svg.empty()) write_file(s_svg, svg::bar_chart(s.names, s.inclusion, "Inclusion probabilities"));
            }
            if (!s_joint.empty()) {
                const auto pair = split(s_joint, ',');
                if (pair.size() != 2) throw UsageError("--jointness expects VAR1,VAR2");
                const auto i = candidate_index(r, pair[0]), j = candidate_index(r, pair[1]);
                out << format_jointness(pair[0], pair[1], jointness(r, i, j, &ws));
            }
            print_warnings(err, ws);
            return 0;
        }
        if (c_coef->parsed()) {
            ResultFile rf = load_result(bc_file);
            std::vector<std::string> ws;
            attach_context(rf, ws);
            print_warnings(err, ws);
            const std::uint64_t seed = bc_seed ? *bc_seed : entropy_seed();
            err << "seed: " << seed << "\n";
            BmaSamples s = sample_coeffs(rf.result, bc_nsim, seed);
            s.provenance.source = result_id(rf);
            print_warnings(err, s.provenance.warnings);
            if (rf.result.method == Method::Exact)
                err << "The " << s.provenance.models_used << " models used accumulate "
                    << fmt("%.4f", s.provenance.accumulated_probability) << " of the total posterior probability\n";
            fs::path path = bc_out;
            if (path.empty()) {
                fs::create_directories(bc_out_dir);
                path = fs::path(bc_out_dir) / "samples.csv";
            }
            write_file(path, samples_csv(s.names, s.draws, provenance_line("bma-coef", s.provenance)));
            out << quantile_table(s.names, s.draws);
            err << "samples written to " << path.string() << "\n";
            return 0;
        }
        if (c_pred->parsed()) {
            ResultFile rf = load_result(pr_file);
            std::vector<std::string> ws;
            attach_context(rf, ws);
            print_warnings(err, ws);
            Dataset nd = load_csv(pr_new);
            const auto points = prediction_points(nd, bind(parse_formula(rf.formula), load_csv(rf.data.path)), rf.result);
            const std::uint64_t seed = pr_seed ? *pr_seed : entropy_seed();
            err << "seed: " << seed << "\n";
            BmaProvenance prov;
            const Eigen::MatrixXd draws = sample_predictive(rf.result, points, pr_nsim, seed, &prov);
            prov.source = result_id(rf);
            print_warnings(err, prov.warnings);
            std::vector<std::string> names;
            for (std::size_t k = 0; k < points.size(); ++k) names.push_back("point" + std::to_string(k + 1));
            fs::path path = pr_out;
            if (path.empty()) {
                fs::create_directories(pr_out_dir);
                path = fs::path(pr_out_dir) / "predictions.csv";
            }
            write_file(path, samples_csv(names, draws, provenance_line("predict", prov)));
            out << quantile_table(names, draws);
            err << "predictions written to " << path.string() << "\n";
            return 0;
        }
        if (c_joint->parsed()) {
            ResultFile rf = load_result(j_file);
            const ExploreResult& r = rf.result;
            Warnings ws;
            if (j_cov == "All") {
                const std::size_t p = r.p();
                const auto incl = r.acc.inclusion();
                Eigen::MatrixXd j1(p, p), j2(p, p), j3(p, p);
                for (std::size_t i = 0; i < p; ++i)
                    for (std::size_t j = 0; j < p; ++j) {
                        const auto ji = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
                        if (i == j) {
                            j1(ji, jj) = incl[i];
                            j2(ji, jj) = 1.0;
                            j3(ji, jj) = std::nan("");
                            continue;
                        }
                        const Jointness x = jointness(r, i, j, &ws);
                        j1(ji, jj) = x.joint;
                        j2(ji, jj) = x.vs_either;
                        j3(ji, jj) = x.vs_one_alone;
                    }
                out << "# joint inclusion probability\n" << matrix_csv(r.names, j1);
                out << "# joint over probability of at least one\n" << matrix_csv(r.names, j2);
                out << "# joint over probability of exactly one\n" << matrix_csv(r.names, j3);
            } else {
                const auto pair = split(j_cov, ',');
                if (pair.size() != 2) throw UsageError("--covariates expects VAR1,VAR2 or All");
                const auto i = candidate_index(r, pair[0]), j = candidate_index(r, pair[1]);
                out << format_jointness(pair[0], pair[1], jointness(r, i, j, &ws));
            }
            print_warnings(err, ws);
            return 0;
        }
        if (c_hist->parsed()) {
            const BmaSamples s = read_samples(h_file);
            const HistData h = hist_data(s, h_cov, h_breaks);
            std::ostringstream os;
            os << "lower,upper,count\n";
            os << "0,0," << h.zero_count << "\n";
            for (std::size_t b = 0; b < h.counts.size(); ++b)
                os << fmt("%.10g", h.edges[b]) << "," << fmt("%.10g", h.edges[b + 1]) << "," << h.counts[b] << "\n";
            if (h_out.empty())
                out << os.str();
            else
                write_file(h_out, os.str());
            if (!h_svg.empty()) write_file(h_svg, svg::histogram(h, h_cov));
            err << h.zero_count << " of " << s.draws.rows() << " draws of " << h_cov << " are exactly zero\n";
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace bvs::cli
