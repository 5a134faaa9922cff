// haar: command-line front end to the library.
//
// Exit codes: 0 success, 1 usage error or malformed input, 2 numerical failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haar.hpp"

using namespace haar;
using io::Json;

namespace {

/// A chart diagnostic with the file it came from, printed as file:line:col.
struct ChartDiagnostic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Chart load(const std::string& spec) {
    try {
        return load_chart(spec);
    } catch (const dsl::ParseError& e) {
        const auto pos = e.position();
        throw ChartDiagnostic(spec + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                              ": error: " + std::string(dsl::to_string(e.kind())) + ": " + e.message());
    }
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

/// Comma-separated constant expressions such as "0,pi/2,-pi".
std::vector<double> parse_numbers(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& item : split(s)) {
        try {
            out.push_back(dsl::evaluate_constant(item));
        } catch (const dsl::ParseError& e) {
            throw InvalidArgument(std::string(what) + ": cannot read '" + item + "': " + e.what());
        }
    }
    if (out.empty()) throw InvalidArgument(std::string(what) + ": empty list");
    return out;
}

/// "8", "0,2,4" or "0-12".
std::vector<int> parse_orders(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split(s)) {
        const auto dash = item.find('-', 1);
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
                for (int n = lo; n <= hi; ++n) out.push_back(n);
            }
        } catch (const std::logic_error&) {
            throw InvalidArgument("--order: cannot read '" + item + "'");
        }
    }
    for (int n : out)
        if (n < 0) throw InvalidArgument("--order: orders must be nonnegative");
    if (out.empty()) throw InvalidArgument("--order: empty list");
    return out;
}

std::vector<int> node_counts(const std::string& s, std::size_t axes) {
    std::vector<int> out;
    for (const auto& item : split(s)) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::logic_error&) {
            throw InvalidArgument("--nodes: cannot read '" + item + "'");
        }
    }
    if (out.size() == 1) out.assign(axes, out.front());
    if (out.size() != axes)
        throw InvalidArgument("--nodes: give one count or one per chart parameter (" + std::to_string(axes) + ")");
    for (int n : out)
        if (n < 1) throw InvalidArgument("--nodes: counts must be positive");
    return out;
}

std::string fmt9(double x) { return io::format_number(x, 9); }

/// Where output goes: stdout or the --out file.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InvalidArgument("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct Common {
    std::string format = "text";
    std::string out;
};

void add_common(CLI::App* app, Common& c, const std::string& default_format = "text",
                std::vector<std::string> formats = {"text", "json"}) {
    c.format = default_format;
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
    app->add_option("--out", c.out, "Write output to this file instead of stdout");
}

HaarDensity numeric_density(const Chart& chart, const std::string& nodes, double step) {
    const auto rule = QuadratureRule::gauss_legendre(chart.domain(), node_counts(nodes, chart.domain().size()));
    return HaarDensity::normalize(chart, algebra_basis(chart, step), rule, step);
}

// density ---------------------------------------------------------------------

struct DensityArgs {
    Common common;
    std::string chart, point, nodes = "32";
    bool closed_form = false, numeric = false;
    double step = kDefaultStep;
};

int run_density(const DensityArgs& a) {
    const Chart chart = load(a.chart);
    const auto u = parse_numbers(a.point, "--point");
    const bool want_numeric = a.numeric || !a.closed_form;
    Json j;
    j["chart"] = chart.name();
    j["point"] = u;
    std::optional<double> closed, numeric, c;
    if (a.closed_form) closed = HaarDensity::closed_form(chart)(u);
    if (want_numeric) {
        const auto h = numeric_density(chart, a.nodes, a.step);
        numeric = h(u);
        c = h.normalization();
    }
    if (closed) j["closed_form"] = *closed;
    if (numeric) {
        j["numeric"] = *numeric;
        j["normalization"] = *c;
    }
    if (closed && numeric) j["difference"] = std::abs(*closed - *numeric);
    Sink sink(a.common.out);
    if (a.common.format == "json") {
        sink.out() << io::to_string(j) << '\n';
    } else {
        if (closed) sink.out() << "closed form    " << fmt9(*closed) << '\n';
        if (numeric) {
            sink.out() << "numeric        " << fmt9(*numeric) << '\n';
            sink.out() << "normalization  " << fmt9(*c) << '\n';
        }
    }
    return 0;
}

// normalize -------------------------------------------------------------------

struct NormalizeArgs {
    Common common;
    std::string chart, nodes = "32";
    double step = kDefaultStep;
};

int run_normalize(const NormalizeArgs& a) {
    const Chart chart = load(a.chart);
    const auto h = numeric_density(chart, a.nodes, a.step);
    Sink sink(a.common.out);
    if (a.common.format == "json") {
        Json j;
        j["chart"] = chart.name();
        j["nodes"] = h.nodes_per_axis();
        j["normalization"] = h.normalization();
        sink.out() << io::to_string(j) << '\n';
    } else {
        sink.out() << fmt9(h.normalization()) << '\n';
    }
    return 0;
}

// sample ----------------------------------------------------------------------

struct SampleArgs {
    Common common;
    std::string group, chart;
    std::size_t count = 1;
    std::uint64_t seed = 0;
};

int run_sample(const SampleArgs& a) {
    SamplerConfig config;
    config.group = parse_group_tag(a.group);
    config.chart = a.chart.empty() ? (group_dimension(config.group) == 2 ? SamplerChart::angle : SamplerChart::euler)
                                   : parse_sampler_chart(a.chart);
    config.seed = a.seed;
    config.count = a.count;
    Sampler sampler(config);
    Sink sink(a.common.out);
    auto& out = sink.out();
    const bool quaternions = config.group == GroupTag::so3 && config.chart == SamplerChart::quaternion;
    for (std::size_t i = 0; i < config.count; ++i) {
        const Draw d = sampler.next();
        if (a.common.format == "csv") {
            const Matrix& m = d.element.matrix();
            for (int r = 0; r < m.rows(); ++r)
                for (int c = 0; c < m.cols(); ++c) out << (r || c ? "," : "") << io::format_number(m(r, c));
            out << '\n';
        } else {
            Json j;
            if (quaternions)
                j["q"] = std::vector<double>{d.quaternion->w, d.quaternion->x, d.quaternion->y, d.quaternion->z};
            else
                j["R"] = io::matrix_to_json(d.element.matrix());
            out << io::to_string(j) << '\n';
        }
    }
    return 0;
}

// check-chart -----------------------------------------------------------------

struct CheckArgs {
    Common common;
    std::string chart, nodes = "32";
    std::uint64_t seed = 1;
    double tolerance = 1e-7;
};

int run_check(const CheckArgs& a) {
    const Chart chart = load(a.chart);
    Json j;
    j["chart"] = chart.name();
    j["parameters"] = chart.parameter_count();
    j["matrix_dim"] = chart.matrix_dim();
    j["group"] = std::string(dsl::to_string(chart.ast().group));

    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double defect = 0.0;
    for (int k = 0; k < 100; ++k) {
        std::vector<double> u;
        for (const auto& iv : chart.domain()) u.push_back(iv.lower + unit(rng) * iv.width());
        defect = std::max(defect, orthogonality_defect(chart.realize(chart.evaluate(u)).matrix()));
    }
    j["orthogonality_defect"] = defect;
    bool ok = defect <= kInputTolerance;

    const auto h = numeric_density(chart, a.nodes, kDefaultStep);
    j["normalization"] = h.normalization();

    if (!chart.builtin_tag().empty() && chart.builtin_tag() != "so2-shifted") {
        const auto closed = HaarDensity::closed_form(chart);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            std::vector<double> u;
            for (const auto& iv : chart.domain()) u.push_back(iv.lower + (0.01 + 0.98 * unit(rng)) * iv.width());
            worst = std::max(worst, std::abs(h(u) - closed(u)));
        }
        j["closed_form_deviation"] = worst;
        ok = ok && worst < 1e-6;
    }

    const auto group = chart.realized_group();
    if (group && is_special(*group)) {
        const auto rule = QuadratureRule::gauss_legendre(chart.domain(), node_counts(a.nodes, chart.domain().size()));
        const auto quad = GroupQuadrature::build(h, rule, *group);
        std::vector<GroupElement> shifts;
        Sampler sampler({*group, group_dimension(*group) == 2 ? SamplerChart::angle : SamplerChart::euler, a.seed, 3});
        for (int k = 0; k < 3; ++k) shifts.push_back(sampler.next().element);
        const auto r = invariance_battery(quad, shifts);
        Json inv;
        inv["total_mass"] = r.total_mass;
        inv["left"] = r.left;
        inv["right"] = r.right;
        inv["inversion"] = r.inversion;
        inv["monomials"] = r.monomials;
        j["invariance"] = inv;
        ok = ok && r.worst() < a.tolerance && std::abs(r.total_mass - 1.0) < a.tolerance;
    }
    j["ok"] = ok;

    Sink sink(a.common.out);
    if (a.common.format == "json") {
        sink.out() << io::to_string(j) << '\n';
    } else {
        auto& out = sink.out();
        out << "chart                 " << chart.name() << " (" << chart.parameter_count() << " parameters, "
            << chart.matrix_dim() << "x" << chart.matrix_dim() << ", group " << j["group"].get<std::string>() << ")\n";
        out << "orthogonality defect  " << fmt9(defect) << '\n';
        out << "normalization         " << fmt9(h.normalization()) << '\n';
        if (j.contains("closed_form_deviation"))
            out << "closed-form deviation " << fmt9(j["closed_form_deviation"].get<double>()) << '\n';
        if (j.contains("invariance")) {
            const auto& inv = j["invariance"];
            out << "total mass            " << fmt9(inv["total_mass"].get<double>()) << '\n';
            out << "left invariance       " << fmt9(inv["left"].get<double>()) << '\n';
            out << "right invariance      " << fmt9(inv["right"].get<double>()) << '\n';
            out << "inversion invariance  " << fmt9(inv["inversion"].get<double>()) << '\n';
        }
        out << (ok ? "ok" : "FAILED") << '\n';
    }
    return ok ? 0 : 2;
}

// dim -------------------------------------------------------------------------

struct DimArgs {
    Common common;
    std::string group, orders, method = "closed", nodes;
};

int run_dim(const DimArgs& a) {
    const GroupTag group = parse_group_tag(a.group);
    const auto orders = parse_orders(a.orders);
    const bool closed = a.method == "closed" || a.method == "all";
    const bool reduced = a.method == "reduced" || a.method == "all";
    const bool quadrature = a.method == "quadrature" || a.method == "all";
    std::optional<GroupQuadrature> quad;
    if (quadrature) {
        const int n = a.nodes.empty() ? 32 : node_counts(a.nodes, 1).front();
        quad = GroupQuadrature::build(group, n);
    }
    const int reduced_nodes = a.nodes.empty() || quadrature ? 256 : node_counts(a.nodes, 1).front();

    Json rows = Json::array();
    bool unresolved = false;
    for (int n : orders) {
        Json row;
        row["order"] = n;
        if (closed) row["closed"] = dim_invariants_closed(group, n).str();
        const auto add = [&](const char* key, const DimensionEstimate& e) {
            row[key] = e.value;
            row[std::string(key) + "_resolved"] = e.resolved;
            unresolved = unresolved || !e.resolved;
        };
        if (reduced) add("reduced", dim_invariants_reduced(group, n, reduced_nodes));
        if (quadrature) add("quadrature", dim_invariants_quadrature(*quad, n));
        rows.push_back(std::move(row));
    }

    Sink sink(a.common.out);
    auto& out = sink.out();
    if (a.common.format == "json") {
        Json j;
        j["group"] = std::string(to_string(group));
        j["dimensions"] = rows;
        out << io::to_string(j) << '\n';
    } else if (orders.size() == 1 && a.method != "all") {
        const auto& row = rows.front();
        if (closed)
            out << row["closed"].get<std::string>() << '\n';
        else
            out << fmt9(row[reduced ? "reduced" : "quadrature"].get<double>()) << '\n';
    } else {
        char line[160];
        std::snprintf(line, sizeof line, "%5s", "n");
        out << line;
        if (closed) out << "  " << std::string(24 - 6, ' ') << "closed";
        if (reduced) out << "  " << std::string(24 - 7, ' ') << "reduced";
        if (quadrature) out << "  " << std::string(24 - 10, ' ') << "quadrature";
        out << '\n';
        for (const auto& row : rows) {
            std::snprintf(line, sizeof line, "%5d", row["order"].get<int>());
            out << line;
            const auto cell = [&](const std::string& text) {
                out << "  " << std::string(text.size() < 24 ? 24 - text.size() : 0, ' ') << text;
            };
            if (closed) cell(row["closed"].get<std::string>());
            if (reduced) cell(fmt9(row["reduced"].get<double>()));
            if (quadrature) cell(fmt9(row["quadrature"].get<double>()));
            out << '\n';
        }
    }
    if (unresolved) {
        std::cerr << "haar: warning: quadrature value more than 1e-3 away from an integer; increase --nodes\n";
        return 2;
    }
    return 0;
}

// reynolds --------------------------------------------------------------------

struct ReynoldsArgs {
    Common common;
    std::string group, tensor;
    int nodes = 32;
    int rank_order = -1;
};

int run_reynolds(const ReynoldsArgs& a) {
    const GroupTag group = parse_group_tag(a.group);
    const auto quad = GroupQuadrature::build(group, a.nodes);
    Json j;
    if (!a.tensor.empty()) {
        const Tensor t = io::read_tensor_file(a.tensor);
        if (t.dim() != group_dimension(group))
            throw DimensionError(a.tensor + ": tensor dimension " + std::to_string(t.dim()) + " does not match " +
                                 std::string(to_string(group)));
        j = io::tensor_to_json(reynolds_continuous(quad, t));
    }
    if (a.rank_order >= 0) {
        Json r;
        r["order"] = a.rank_order;
        r["rank"] = numerical_rank(reynolds_operator(quad, a.rank_order));
        r["closed"] = dim_invariants_closed(group, a.rank_order).str();
        j["operator_rank"] = r;
    }
    if (j.is_null()) throw InvalidArgument("reynolds: give --tensor, --rank-order or both");
    Sink sink(a.common.out);
    sink.out() << io::to_string(j) << '\n';
    return 0;
}

// orbit-moments ---------------------------------------------------------------

struct OrbitArgs {
    Common common;
    std::string group = "so3", rep, tensor, diag, sampler_chart;
    int nodes = 32;
    std::size_t mc = 0;
    std::uint64_t seed = 0;
};

int run_orbit(const OrbitArgs& a) {
    const GroupTag group = parse_group_tag(a.group);
    if (a.tensor.empty() == a.diag.empty()) throw InvalidArgument("orbit-moments: give exactly one of --tensor, --diag");
    Tensor v;
    if (!a.diag.empty()) {
        const auto d = parse_numbers(a.diag, "--diag");
        Matrix m = Matrix::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        v = Tensor::from_matrix(m);
    } else {
        v = io::read_tensor_file(a.tensor);
    }
    Representation rep;
    if (!a.rep.empty())
        rep = parse_representation(a.rep);
    else
        rep = v.order() == 1 ? Representation::natural : v.order() == 2 ? Representation::sym2 : Representation::tensor;
    const OrbitSpec spec(group, rep, v);
    const auto quad = GroupQuadrature::build(group, a.nodes);

    const Tensor m1 = moment(spec, 1, quad);
    const Tensor m2 = moment(spec, 2, quad);
    Json j;
    j["group"] = std::string(to_string(group));
    j["representation"] = std::string(to_string(rep));
    j["m1"] = io::tensor_to_json(m1);
    j["m2"] = io::tensor_to_json(m2);
    j["cov"] = io::tensor_to_json(m2 - outer(m1, m1));
    if (a.mc > 0) {
        SamplerConfig config;
        config.group = group;
        config.chart = a.sampler_chart.empty()
                           ? (group_dimension(group) == 2 ? SamplerChart::angle : SamplerChart::euler)
                           : parse_sampler_chart(a.sampler_chart);
        config.seed = a.seed;
        config.count = a.mc;
        const auto e1 = mc_moments(spec, 1, config);
        const auto e2 = mc_moments(spec, 2, config);
        Json mean, se;
        mean["m1"] = io::tensor_to_json(e1.mean);
        mean["m2"] = io::tensor_to_json(e2.mean);
        se["m1"] = io::tensor_to_json(e1.standard_error);
        se["m2"] = io::tensor_to_json(e2.standard_error);
        j["mc_count"] = a.mc;
        j["mc_mean"] = mean;
        j["mc_stderr"] = se;
    } else {
        j["mc_stderr"] = nullptr;
    }
    Sink sink(a.common.out);
    sink.out() << io::to_string(j) << '\n';
    return 0;
}

// chart-change ----------------------------------------------------------------

struct ChangeArgs {
    Common common;
    std::string from, to, point, offset, nodes = "32";
    double step = kDefaultStep;
    double tolerance = -1.0;
};

int run_change(const ChangeArgs& a) {
    const Chart c1 = load(a.from), c2 = load(a.to);
    const auto u = parse_numbers(a.point, "--point");
    const ChartMap phi = a.offset.empty() ? matrix_matching_map(c1, c2) : offset_map(parse_numbers(a.offset, "--offset"));
    const auto k1 = numeric_density(c1, a.nodes, a.step);
    const auto k2 = numeric_density(c2, a.nodes, a.step);
    const auto r = chart_change_check(k1, k2, phi, u, a.step);
    Json j;
    j["from"] = c1.name();
    j["to"] = c2.name();
    j["point"] = u;
    j["mapped"] = r.mapped;
    j["jacobian_determinant"] = r.jacobian_determinant;
    j["density_from"] = r.density_from;
    j["density_to"] = r.density_to;
    j["residual"] = r.residual;
    Sink sink(a.common.out);
    if (a.common.format == "json") {
        sink.out() << io::to_string(j) << '\n';
    } else {
        auto& out = sink.out();
        out << "k1(u)             " << fmt9(r.density_from) << '\n';
        out << "k2(phi(u))        " << fmt9(r.density_to) << '\n';
        out << "det J_phi(u)      " << fmt9(r.jacobian_determinant) << '\n';
        out << "residual          " << fmt9(r.residual) << '\n';
    }
    if (a.tolerance >= 0.0 && r.residual > a.tolerance) return 2;
    return 0;
}

// integrate -------------------------------------------------------------------

struct IntegrateArgs {
    Common common;
    std::string group, integrand;
    int nodes = 32;
};

int run_integrate(const IntegrateArgs& a) {
    const GroupTag group = parse_group_tag(a.group);
    const int d = group_dimension(group);
    std::vector<std::string> names;
    for (int i = 1; i <= d; ++i)
        for (int k = 1; k <= d; ++k) names.push_back("g" + std::to_string(i) + std::to_string(k));
    dsl::ExprPtr f;
    try {
        f = dsl::parse_expression(a.integrand, names);
    } catch (const dsl::ParseError& e) {
        throw InvalidArgument(std::string("--integrand: ") + e.what());
    }
    const auto quad = GroupQuadrature::build(group, a.nodes);
    std::vector<double> entries(static_cast<std::size_t>(d * d));
    const double value = quad.integrate([&](const GroupElement& g) {
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) entries[static_cast<std::size_t>(i * d + k)] = g(i, k);
        return dsl::evaluate(*f, entries);
    });
    Sink sink(a.common.out);
    if (a.common.format == "json") {
        Json j;
        j["group"] = std::string(to_string(group));
        j["integrand"] = dsl::print(*f);
        j["value"] = value;
        sink.out() << io::to_string(j) << '\n';
    } else {
        sink.out() << fmt9(value) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Haar measures, uniform sampling and invariant tensors on SO(2), O(2), SO(3), O(3)", "haar"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "haar 0.1.0");

    const std::string chart_help = "Chart file, or builtin:<tag> with tag one of so2-angle, so2-shifted, so3-euler, "
                                   "so3-polar, so3-quat";
    const std::string group_help = "Group: so2, o2, so3 or o3";

    DensityArgs density;
    auto* c_density = app.add_subcommand("density", "Evaluate the normalized Haar density at a point of a chart");
    c_density->add_option("--chart", density.chart, chart_help)->required();
    c_density->add_option("--point", density.point, "Chart coordinates, comma separated (radians; pi allowed)")
        ->required();
    c_density->add_flag("--closed-form", density.closed_form, "Evaluate the closed-form density (built-in charts)");
    c_density->add_flag("--numeric", density.numeric, "Evaluate the numeric density (the default)");
    c_density->add_option("--nodes", density.nodes, "Gauss-Legendre nodes per axis for the normalization")
        ->capture_default_str();
    c_density->add_option("--step", density.step, "Finite-difference step")->capture_default_str();
    add_common(c_density, density.common);

    NormalizeArgs normalize;
    auto* c_normalize = app.add_subcommand("normalize", "Report the normalization constant C of a chart's density");
    c_normalize->add_option("--chart", normalize.chart, chart_help)->required();
    c_normalize->add_option("--nodes", normalize.nodes, "Nodes per axis, one count or one per parameter")
        ->capture_default_str();
    c_normalize->add_option("--step", normalize.step, "Finite-difference step")->capture_default_str();
    add_common(c_normalize, normalize.common);

    SampleArgs sample;
    auto* c_sample = app.add_subcommand("sample", "Draw Haar-uniform group elements");
    c_sample->add_option("--group", sample.group, group_help)->required();
    c_sample->add_option("--chart", sample.chart,
                         "Sampler chart: angle (2D), euler, polar or quaternion (3D); default angle or euler");
    c_sample->add_option("-n,--count", sample.count, "Number of samples")->capture_default_str();
    c_sample->add_option("--seed", sample.seed, "64-bit seed")->capture_default_str();
    add_common(c_sample, sample.common, "json", {"json", "csv"});

    CheckArgs check;
    auto* c_check =
        app.add_subcommand("check-chart", "Parse a chart and run orthogonality, normalization and invariance checks");
    c_check->add_option("--chart", check.chart, chart_help)->required();
    c_check->add_option("--nodes", check.nodes, "Nodes per axis")->capture_default_str();
    c_check->add_option("--seed", check.seed, "Seed for the random test points and shifts")->capture_default_str();
    c_check->add_option("--tolerance", check.tolerance, "Invariance tolerance")->capture_default_str();
    add_common(c_check, check.common);

    DimArgs dim;
    auto* c_dim = app.add_subcommand("dim", "Dimension of the invariant order-n tensors");
    c_dim->add_option("--group", dim.group, group_help)->required();
    c_dim->add_option("--order", dim.orders, "Tensor order(s): 8, 0,2,4 or 0-12")->required();
    c_dim->add_option("--method", dim.method,
                      "closed (exact), reduced (1D angle integral), quadrature (full group rule) or all")
        ->check(CLI::IsMember({"closed", "reduced", "quadrature", "all"}))
        ->capture_default_str();
    c_dim->add_option("--nodes", dim.nodes, "Nodes: per axis for quadrature (32), total for reduced (256)");
    add_common(c_dim, dim.common);

    ReynoldsArgs reynolds;
    auto* c_reynolds = app.add_subcommand("reynolds", "Average a tensor over a group");
    c_reynolds->add_option("--group", reynolds.group, group_help)->required();
    c_reynolds->add_option("--tensor", reynolds.tensor, "Tensor JSON file {\"dim\", \"order\", \"entries\"}")
        ->check(CLI::ExistingFile);
    c_reynolds->add_option("--rank-order", reynolds.rank_order,
                           "Also report the numerical rank of the Reynolds operator on order-n tensors");
    c_reynolds->add_option("--nodes", reynolds.nodes, "Nodes per axis")->capture_default_str();
    add_common(c_reynolds, reynolds.common, "json", {"json"});

    OrbitArgs orbit;
    auto* c_orbit = app.add_subcommand("orbit-moments", "First and second moments of a group orbit");
    c_orbit->add_option("--group", orbit.group, group_help)->capture_default_str();
    c_orbit->add_option("--rep", orbit.rep, "Representation: natural, tensor or sym2 (default from the seed's order)");
    c_orbit->add_option("--tensor", orbit.tensor, "Seed tensor JSON file")->check(CLI::ExistingFile);
    c_orbit->add_option("--diag", orbit.diag, "Seed diagonal matrix, e.g. 1,2,3");
    c_orbit->add_option("--nodes", orbit.nodes, "Nodes per axis")->capture_default_str();
    c_orbit->add_option("--mc", orbit.mc, "Monte Carlo sample count (0 disables)")->capture_default_str();
    c_orbit->add_option("--seed", orbit.seed, "Monte Carlo seed")->capture_default_str();
    c_orbit->add_option("--sampler-chart", orbit.sampler_chart, "Sampler chart for Monte Carlo");
    add_common(c_orbit, orbit.common, "json", {"json"});

    ChangeArgs change;
    auto* c_change = app.add_subcommand("chart-change", "Check k1(u) = |det J_phi(u)| k2(phi(u)) for two charts");
    c_change->add_option("--from", change.from, chart_help)->required();
    c_change->add_option("--to", change.to, chart_help)->required();
    c_change->add_option("--point", change.point, "Point u in the first chart")->required();
    c_change->add_option("--offset", change.offset,
                         "phi(u) = u + offset (comma separated); default locates p1(u) in the second chart");
    c_change->add_option("--nodes", change.nodes, "Nodes per axis for the normalizations")->capture_default_str();
    c_change->add_option("--step", change.step, "Finite-difference step")->capture_default_str();
    c_change->add_option("--tolerance", change.tolerance, "Exit with status 2 when the residual exceeds this");
    add_common(c_change, change.common);

    IntegrateArgs integrate;
    auto* c_integrate = app.add_subcommand("integrate", "Integrate a polynomial in the matrix entries over a group");
    c_integrate->add_option("--group", integrate.group, group_help)->required();
    c_integrate->add_option("--integrand", integrate.integrand, "Expression in g11 .. g33, e.g. 'g11^2 + g22'")
        ->required();
    c_integrate->add_option("--nodes", integrate.nodes, "Nodes per axis")->capture_default_str();
    add_common(c_integrate, integrate.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*c_density) return run_density(density);
        if (*c_normalize) return run_normalize(normalize);
        if (*c_sample) return run_sample(sample);
        if (*c_check) return run_check(check);
        if (*c_dim) return run_dim(dim);
        if (*c_reynolds) return run_reynolds(reynolds);
        if (*c_orbit) return run_orbit(orbit);
        if (*c_change) return run_change(change);
        if (*c_integrate) return run_integrate(integrate);
    } catch (const ChartDiagnostic& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const ChartFileError& e) {
        std::cerr << e.origin() << ": error: " << e.what() << '\n';
        return 1;
    } catch (const InvalidArgument& e) {
        std::cerr << "haar: error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "haar: numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "haar: error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
