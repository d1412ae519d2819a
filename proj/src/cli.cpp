#include "tsallis/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tsallis/errors.hpp"
#include "tsallis/estimators.hpp"
#include "tsallis/expmodel.hpp"
#include "tsallis/oracle.hpp"
#include "tsallis/simlab.hpp"

namespace tsallis::cli {

namespace {

namespace est = tsallis::estimators;
using expmodel::EntropicConfig;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Options {
    int k = 1;
    std::optional<int> n;
    std::optional<double> q;
    double sigma = 1.0;
    std::string u;
    std::optional<double> alpha;
    std::optional<double> beta;
    double level = 0.95;
    int M = 10000;
    std::uint64_t seed = 0;
    std::string method;
    std::string r;
    std::string preset;
    std::string format = "csv";
    std::string out;
    std::string data;
    int threads = 0;
};

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

std::vector<double> parse_list(const std::string& text, std::string_view flag) {
    std::vector<double> values;
    std::string_view rest = text;
    while (true) {
        const auto pos = rest.find(',');
        const auto item = rest.substr(0, pos);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw UsageError(fmt::format("{} expects comma-separated numbers (got '{}')", flag, text));
        }
        values.push_back(v);
        if (pos == std::string_view::npos) break;
        rest = rest.substr(pos + 1);
    }
    return values;
}

double require_q(const Options& o) {
    if (!o.q) throw UsageError("--q is required");
    return *o.q;
}

int require_n(const Options& o) {
    if (!o.n) throw UsageError("--n is required");
    return *o.n;
}

EntropicConfig make_config(int k, int n, double q) {
    if (k < 1) throw UsageError(fmt::format("k must be >= 1 (got k={})", k));
    if (n < 2) throw UsageError(fmt::format("n must be >= 2 (got n={})", n));
    try {
        return EntropicConfig(k, n, q);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

expmodel::PopulationParams make_params(const Options& o) {
    if (!(o.sigma > 0.0) || !std::isfinite(o.sigma)) {
        throw UsageError(fmt::format("sigma must be > 0 (got sigma={})", o.sigma));
    }
    std::vector<double> u(o.k, 0.0);
    if (!o.u.empty()) {
        u = parse_list(o.u, "--u");
        if (static_cast<int>(u.size()) != o.k) {
            throw UsageError(fmt::format("--u needs k={} values, got {}", o.k, u.size()));
        }
    }
    return {u, o.sigma};
}

std::optional<est::IGPrior> make_prior(const Options& o) {
    if (o.alpha.has_value() != o.beta.has_value()) {
        throw UsageError("the inverse-gamma prior needs both --alpha and --beta");
    }
    if (!o.alpha) return std::nullopt;
    est::IGPrior prior{*o.alpha, *o.beta};
    try {
        prior.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return prior;
}

// Builds the estimator spec for --method, enforcing the flag pairings.
est::EstimatorSpec make_spec(const Options& o, int k) {
    est::EstimatorSpec spec;
    try {
        spec.kind = est::parse_kind(o.method);
    } catch (const tsallis::ParseError& e) {
        throw UsageError(e.what());
    }
    if (!o.r.empty() && spec.kind != est::EstimatorKind::BzFinite) {
        throw UsageError("--r applies to --method bz-finite only");
    }
    if (spec.kind == est::EstimatorKind::BzFinite) {
        if (o.r.empty()) throw UsageError("--method bz-finite requires --r");
        auto r = parse_list(o.r, "--r");
        if (static_cast<int>(r.size()) != k) {
            throw UsageError(fmt::format("--r needs k={} values, got {}", k, r.size()));
        }
        try {
            spec.box = est::BoxBound(std::move(r));
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    if (spec.kind == est::EstimatorKind::Bayes) {
        spec.prior = make_prior(o);
        if (!spec.prior) throw UsageError("--method bayes requires --alpha and --beta");
    }
    return spec;
}

expmodel::SampleMatrix load_data(const Options& o) {
    if (o.data.empty()) throw UsageError("--data is required");
    std::ifstream in(o.data);
    if (!in) throw IoError(fmt::format("cannot read '{}'", o.data));
    expmodel::SampleMatrix data;
    try {
        data = expmodel::read_sample_csv(in);
    } catch (const tsallis::ParseError& e) {
        throw UsageError(fmt::format("{}: {}", o.data, e.what()));
    }
    if (o.n && *o.n != data.n()) {
        throw UsageError(fmt::format("--n {} disagrees with the data ({} observations per row)", *o.n, data.n()));
    }
    return data;
}

std::string join(const std::vector<double>& v, std::string_view fmt_spec) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += fmt::format(fmt::runtime(fmt_spec), v[i]);
    }
    return s;
}

simlab::RunOptions run_options(const Options& o) {
    if (o.threads < 0) throw UsageError("--threads must be >= 0");
    return {o.threads};
}

void check_replications(const Options& o) {
    if (o.M < simlab::kMinReplications) {
        throw UsageError(fmt::format("--M must be >= {} (got {})", simlab::kMinReplications, o.M));
    }
}

double confidence_alpha(const Options& o) {
    if (!(o.level > 0.0 && o.level < 1.0)) {
        throw UsageError(fmt::format("--level must satisfy 0<level<1 (got {})", o.level));
    }
    return 1.0 - o.level;
}

// ---- subcommands ----------------------------------------------------------

void cmd_entropy(const Options& o, std::ostream& out) {
    const double q = require_q(o);
    if (o.k < 1) throw UsageError(fmt::format("k must be >= 1 (got k={})", o.k));
    if (!(o.sigma > 0.0)) throw UsageError(fmt::format("sigma must be > 0 (got sigma={})", o.sigma));
    try {
        expmodel::check_entropic_index(q);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    out << fmt::format("{:.12g}\n", expmodel::tsallis_joint(o.k, q, o.sigma));
}

void cmd_estimate(const Options& o, std::ostream& out) {
    const auto data = load_data(o);
    const auto cfg = make_config(data.k(), data.n(), require_q(o));
    Options with = o;
    if (with.method.empty()) with.method = "baee";
    const auto spec = make_spec(with, cfg.k());
    const auto stats = expmodel::summarize(data);
    const auto e = est::EstimatorPlan(cfg, spec).apply(stats);
    out << "method,k,n,q,t,w,base,multiplier,estimate\n";
    out << fmt::format("{},{},{},{},{:.12g},{},{:.12g},{:.12g},{:.12g}\n", est::to_string(e.kind), cfg.k(),
                       cfg.n(), cfg.q(), stats.t, join(stats.w, "{:.12g}"), e.base, e.multiplier, e.value);
}

void cmd_ci(const Options& o, std::ostream& out) {
    const auto data = load_data(o);
    const auto cfg = make_config(data.k(), data.n(), require_q(o));
    const double alpha = confidence_alpha(o);
    const auto ci = est::confidence_interval(expmodel::summarize(data), cfg, alpha);
    out << "level,lower,upper\n";
    out << fmt::format("{},{:.12g},{:.12g}\n", o.level, ci.lower, ci.upper);
}

void cmd_ci_coverage(const Options& o, std::ostream& out) {
    const auto cfg = make_config(o.k, require_n(o), require_q(o));
    const auto params = make_params(o);
    const double alpha = confidence_alpha(o);
    check_replications(o);
    const double cov = simlab::ci_coverage(cfg, params, alpha, o.M, o.seed, run_options(o));
    out << "k,n,q,level,M,seed,coverage\n";
    out << fmt::format("{},{},{},{},{},{},{:.6f}\n", cfg.k(), cfg.n(), cfg.q(), o.level, o.M, o.seed, cov);
}

void cmd_risk_table(const Options& o, std::ostream& out) {
    const auto cfg = make_config(o.k, require_n(o), require_q(o));
    const auto params = make_params(o);
    check_replications(o);
    std::vector<est::EstimatorSpec> specs{{est::EstimatorKind::Baee, {}, {}}};
    if (!o.method.empty()) {
        auto spec = make_spec(o, cfg.k());
        if (spec.kind != est::EstimatorKind::Baee) specs.push_back(std::move(spec));
    } else {
        for (auto kind : {est::EstimatorKind::Mle, est::EstimatorKind::Stein, est::EstimatorKind::BzSmooth}) {
            specs.push_back({kind, {}, {}});
        }
        if (!o.r.empty()) {
            Options with = o;
            with.method = "bz-finite";
            specs.push_back(make_spec(with, cfg.k()));
        }
        if (auto prior = make_prior(o)) specs.push_back({est::EstimatorKind::Bayes, {}, prior});
    }
    const auto r = simlab::mc_risk_paired(cfg, params, specs, o.M, o.seed, run_options(o));
    out << "method,risk_mean,std_error,pri_vs_baee,diff_std_error,M,seed\n";
    for (std::size_t j = 0; j < specs.size(); ++j) {
        const auto& rep = r.reports[j];
        out << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", est::to_string(rep.kind), rep.risk_mean,
                           rep.std_error, simlab::pri(r.reports[0], rep), r.diff_se[j], rep.M, rep.seed);
    }
}

void cmd_pri_table(const Options& o, std::ostream& out) {
    check_replications(o);
    const auto format = simlab::parse_format(o.format);
    simlab::ExperimentGrid grid;
    if (o.preset == "table1" || o.preset.empty()) {
        grid = simlab::table1_grid(o.M, o.seed);
    } else if (o.preset == "table2") {
        grid = simlab::table2_grid(o.M, o.seed);
    } else {
        throw UsageError(fmt::format("pri-table --preset must be table1 or table2 (got '{}')", o.preset));
    }
    simlab::write_table(out, simlab::run_grid(grid, run_options(o)), format);
}

void cmd_oracle_check(const Options&, std::ostream& out, bool& all_pass) {
    const auto rows = oracle::run_oracle_check();
    out << "quantity,k,n,q,param,closed_form,oracle,abs_gap,rel_gap,tolerance,pass\n";
    all_pass = true;
    for (const auto& row : rows) {
        out << fmt::format("{},{},{},{},{},{:.17g},{:.17g},{:.3e},{:.3e},{:.0e},{}\n", row.quantity, row.k, row.n,
                           row.q, row.param, row.closed_form, row.oracle, row.abs_gap, row.rel_gap, row.tolerance,
                           row.pass ? "pass" : "fail");
        all_pass = all_pass && row.pass;
    }
}

void cmd_plot_data(const Options& o, std::ostream& out) {
    if (o.preset.empty()) throw UsageError("plot-data requires --preset fig1, fig3, fig4 or fig5");
    if (o.preset == "fig1" || o.preset == "fig5") check_replications(o);
    simlab::FigureData fig;
    try {
        fig = simlab::figure_preset(o.preset, o.M, o.seed, run_options(o));
    } catch (const tsallis::ParseError& e) {
        throw UsageError(e.what());
    }
    simlab::write_figure_csv(out, fig);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tsallis entropy of shifted-exponential populations: estimators, risks and tables", "tsallis"};
    app.require_subcommand(1, 1);
    Options o;

    auto add_k = [&](CLI::App* s) { s->add_option("--k", o.k, "number of populations")->capture_default_str(); };
    auto add_n = [&](CLI::App* s) { s->add_option("--n", o.n, "observations per population"); };
    auto add_q = [&](CLI::App* s) { s->add_option("--q", o.q, "entropic index, 0<q<(n+1)/2, q!=1"); };
    auto add_sigma = [&](CLI::App* s) { s->add_option("--sigma", o.sigma, "common scale")->capture_default_str(); };
    auto add_u = [&](CLI::App* s) { s->add_option("--u", o.u, "comma-separated locations (k values, default 0)"); };
    auto add_prior = [&](CLI::App* s) {
        s->add_option("--alpha", o.alpha, "inverse-gamma prior scale");
        s->add_option("--beta", o.beta, "inverse-gamma prior shape");
    };
    auto add_method = [&](CLI::App* s) {
        s->add_option("--method", o.method, "mle, baee, stein, bz-finite, bz-smooth or bayes (estimate: default baee)");
        s->add_option("--r", o.r, "comma-separated box bound (bz-finite only)");
    };
    auto add_mc = [&](CLI::App* s) {
        s->add_option("--M", o.M, "replications")->capture_default_str();
        s->add_option("--seed", o.seed, "base seed")->capture_default_str();
        s->add_option("--threads", o.threads, "worker threads (0: all cores)")->capture_default_str();
    };
    auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out, "write output to this file"); };
    auto add_level = [&](CLI::App* s) {
        s->add_option("--level", o.level, "confidence level 1-alpha")->capture_default_str();
    };

    auto* entropy = app.add_subcommand("entropy", "joint Tsallis entropy of k populations");
    add_k(entropy);
    add_q(entropy);
    add_sigma(entropy);
    add_out(entropy);

    auto* estimate = app.add_subcommand("estimate", "estimate sigma^{k(1-q)} from a CSV sample");
    estimate->add_option("--data", o.data, "CSV file, one population per row");
    add_n(estimate);
    add_q(estimate);
    add_method(estimate);
    add_prior(estimate);
    add_out(estimate);

    auto* risk_table = app.add_subcommand("risk-table", "Monte-Carlo risks on common samples");
    add_k(risk_table);
    add_n(risk_table);
    add_q(risk_table);
    add_sigma(risk_table);
    add_u(risk_table);
    add_method(risk_table);
    add_prior(risk_table);
    add_mc(risk_table);
    add_out(risk_table);

    auto* pri_table = app.add_subcommand("pri-table", "PRI table of the Stein and Brewster-Zidek rules");
    pri_table->add_option("--preset", o.preset, "table1 or table2")->capture_default_str();
    pri_table->add_option("--format", o.format, "csv or json")->capture_default_str();
    add_mc(pri_table);
    add_out(pri_table);

    auto* ci = app.add_subcommand("ci", "confidence interval from a CSV sample");
    ci->add_option("--data", o.data, "CSV file, one population per row");
    add_n(ci);
    add_q(ci);
    add_level(ci);
    add_out(ci);

    auto* coverage = app.add_subcommand("ci-coverage", "Monte-Carlo coverage of the confidence interval");
    add_k(coverage);
    add_n(coverage);
    add_q(coverage);
    add_sigma(coverage);
    add_u(coverage);
    add_level(coverage);
    add_mc(coverage);
    add_out(coverage);

    auto* oracle_check = app.add_subcommand("oracle-check", "closed forms against quadrature");
    add_out(oracle_check);

    auto* plot = app.add_subcommand("plot-data", "data series behind the figures");
    plot->add_option("--preset", o.preset, "fig1, fig3, fig4 or fig5");
    add_mc(plot);
    add_out(plot);

    std::vector<const char*> argv{"tsallis"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "tsallis: usage-error: " << one_line(e.what()) << '\n';
        return kExitUsage;
    }

    // Buffer so that a failing run never leaves a partial --out file.
    std::ostringstream buffer;
    int status = kExitOk;
    try {
        if (entropy->parsed()) cmd_entropy(o, buffer);
        if (estimate->parsed()) cmd_estimate(o, buffer);
        if (risk_table->parsed()) cmd_risk_table(o, buffer);
        if (pri_table->parsed()) cmd_pri_table(o, buffer);
        if (ci->parsed()) cmd_ci(o, buffer);
        if (coverage->parsed()) cmd_ci_coverage(o, buffer);
        if (plot->parsed()) cmd_plot_data(o, buffer);
        if (oracle_check->parsed()) {
            bool all_pass = true;
            cmd_oracle_check(o, buffer, all_pass);
            if (!all_pass) status = kExitRuntime;
        }
    } catch (const UsageError& e) {
        err << "tsallis: usage-error: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const tsallis::ParseError& e) {
        err << "tsallis: usage-error: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "tsallis: usage-error: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "tsallis: usage-error: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "tsallis: runtime-error: " << one_line(e.what()) << '\n';
        return kExitRuntime;
    }

    if (o.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
        file << buffer.str();
        file.flush();
        if (!file) {
            err << "tsallis: runtime-error: " << fmt::format("cannot write '{}'", o.out) << '\n';
            return kExitRuntime;
        }
    }
    if (status == kExitRuntime) err << "tsallis: runtime-error: oracle check failed for at least one row\n";
    return status;
}

}  // namespace tsallis::cli
