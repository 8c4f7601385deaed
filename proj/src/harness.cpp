#include "nystrom/harness.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace nystrom {

namespace {

constexpr cplx I_unit(0.0, 1.0);

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty() || !std::isfinite(value))
        throw ConfigError("bad number for " + key + ": '" + text + "'");
    return value;
}

int parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    int value = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty())
        throw ConfigError("bad integer for " + key + ": '" + text + "'");
    return value;
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string normalize_key(std::string key) {
    key = lower(trim(key));
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

bool is_circle(const std::string& geometry) { return geometry == "circle" || geometry.rfind("circle:", 0) == 0; }

double circle_radius(const Curve& curve) { return curve.coefficients().front().x1_cos; }

} // namespace

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = normalize_key(raw_key);
    const std::string value = trim(raw_value);
    if (key == "geometry") {
        c.geometry = value;
    } else if (key == "omega") {
        c.omega = parse_double(key, value);
    } else if (key == "eps1") {
        c.eps1 = parse_double(key, value);
    } else if (key == "eps2") {
        c.eps2 = parse_double(key, value);
    } else if (key == "polarization") {
        if (value == "E" || value == "e") c.polarization = Polarization::E;
        else if (value == "H" || value == "h") c.polarization = Polarization::H;
        else throw ConfigError("polarization must be E or H");
    } else if (key == "formulations") {
        c.formulations.clear();
        for (const std::string& item : split(value, ','))
            if (!item.empty()) c.formulations.push_back(parse_formulation(item));
    } else if (key == "unknowns") {
        c.unknowns.clear();
        for (const std::string& item : split(value, ','))
            if (!item.empty()) c.unknowns.push_back(parse_int(key, item));
    } else if (key == "tol") {
        c.tol = parse_double(key, value);
    } else if (key == "tol-cfiesk") {
        c.tol_cfiesk = value == "auto" ? std::nullopt : std::optional<double>(parse_double(key, value));
    } else if (key == "kappa") {
        if (value == "auto") {
            c.kappa.reset();
        } else {
            const auto parts = split(value, ',');
            if (parts.size() != 2) throw ConfigError("kappa must be 'auto' or 're,im'");
            c.kappa = cplx(parse_double(key, parts[0]), parse_double(key, parts[1]));
        }
    } else if (key == "eta") {
        c.eta = value == "auto" ? std::nullopt : std::optional<double>(parse_double(key, value));
    } else if (key == "dirs") {
        c.dirs = parse_int(key, value);
    } else if (key == "amplitude") {
        c.amplitude = parse_double(key, value);
    } else if (key == "reference") {
        c.reference = lower(value);
    } else if (key == "reference-factor") {
        c.reference_factor = parse_int(key, value);
    } else if (key == "reference-tol") {
        c.reference_tol = parse_double(key, value);
    } else if (key == "kappa-oversample") {
        c.kappa_oversample = value == "auto" ? 0 : parse_int(key, value);
    } else if (key == "out") {
        c.out = value;
    } else if (key == "format") {
        c.format = lower(value);
    } else {
        throw ConfigError("unknown configuration key: " + raw_key);
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key=value");
        apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    }
    validate(config);
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open configuration file " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

std::string to_config_text(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "geometry=" << c.geometry << '\n';
    out << "omega=" << format_double(c.omega) << '\n';
    out << "eps1=" << format_double(c.eps1) << '\n';
    out << "eps2=" << format_double(c.eps2) << '\n';
    out << "polarization=" << (c.polarization == Polarization::E ? "E" : "H") << '\n';
    out << "formulations=";
    for (std::size_t i = 0; i < c.formulations.size(); ++i) out << (i ? "," : "") << to_string(c.formulations[i]);
    out << "\nunknowns=";
    for (std::size_t i = 0; i < c.unknowns.size(); ++i) out << (i ? "," : "") << c.unknowns[i];
    out << "\ntol=" << format_double(c.tol) << '\n';
    out << "tol-cfiesk=" << (c.tol_cfiesk ? format_double(*c.tol_cfiesk) : "auto") << '\n';
    out << "kappa="
        << (c.kappa ? format_double(c.kappa->real()) + "," + format_double(c.kappa->imag()) : std::string("auto"))
        << '\n';
    out << "eta=" << (c.eta ? format_double(*c.eta) : "auto") << '\n';
    out << "dirs=" << c.dirs << '\n';
    out << "amplitude=" << format_double(c.amplitude) << '\n';
    out << "reference=" << c.reference << '\n';
    out << "reference-factor=" << c.reference_factor << '\n';
    out << "reference-tol=" << format_double(c.reference_tol) << '\n';
    out << "kappa-oversample=" << (c.kappa_oversample == 0 ? std::string("auto") : std::to_string(c.kappa_oversample))
        << '\n';
    if (!c.out.empty()) out << "out=" << c.out << '\n';
    out << "format=" << c.format << '\n';
    return out.str();
}

int unknowns_to_n(int unknowns) {
    if (unknowns < 8 || unknowns % 4 != 0) throw ConfigError("unknown counts must be positive multiples of 4 (>= 8)");
    return unknowns / 4;
}

void validate(const ExperimentConfig& c) {
    if (!(c.omega > 0.0) || !(c.eps1 > 0.0) || !(c.eps2 > 0.0))
        throw ConfigError("omega, eps1 and eps2 must be positive");
    if (c.formulations.empty()) throw ConfigError("no formulations selected");
    if (c.unknowns.empty()) throw ConfigError("no unknown counts given");
    for (int u : c.unknowns) unknowns_to_n(u);
    if (!(c.tol > 0.0) || (c.tol_cfiesk && !(*c.tol_cfiesk > 0.0)) || !(c.reference_tol > 0.0))
        throw ConfigError("GMRES tolerances must be positive");
    if (c.dirs < 1) throw ConfigError("dirs must be >= 1");
    if (c.reference != "auto" && c.reference != "scfie" && c.reference != "analytic")
        throw ConfigError("reference must be auto, scfie or analytic");
    if (c.reference == "analytic" && !is_circle(c.geometry))
        throw ConfigError("analytic reference is only available for circles");
    if (c.reference_factor < 1) throw ConfigError("reference-factor must be >= 1");
    if (c.kappa_oversample < 0) throw ConfigError("kappa-oversample must be auto or >= 1");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
    if (!std::isfinite(c.amplitude)) throw ConfigError("amplitude must be finite");
}

ProblemParams problem_params(const ExperimentConfig& c) {
    ProblemParams p = make_params(c.omega, c.eps1, c.eps2, c.polarization, c.kappa, c.eta);
    p.amplitude = c.amplitude;
    return p;
}

double gmres_tolerance(const ExperimentConfig& c, Formulation which) {
    if (which != Formulation::CFIESK) return c.tol;
    if (c.tol_cfiesk) return *c.tol_cfiesk;
    return c.eps1 > c.eps2 ? 1e-2 * c.tol : c.tol;  // k1 > k2
}

FarFieldPattern circle_far_field(const ProblemParams& p, double radius, int n_dirs) {
    namespace bm = boost::math;
    FarFieldPattern out{uniform_angles(n_dirs), CVector::Zero(n_dirs)};
    const double incidence = std::atan2(p.direction.y(), p.direction.x());
    const double x1 = p.k1 * radius, x2 = p.k2 * radius;
    const int max_mode = static_cast<int>(std::max(x1, x2)) + 40;
    const cplx scale = std::sqrt(2.0 / (std::numbers::pi * p.k1)) * std::exp(-I_unit * std::numbers::pi / 4.0);
    for (int m = -max_mode; m <= max_mode; ++m) {
        const int order = std::abs(m);
        const double j1 = bm::cyl_bessel_j(order, x1), dj1 = bm::cyl_bessel_j_prime(order, x1);
        const double y1 = bm::cyl_neumann(order, x1), dy1 = bm::cyl_neumann_prime(order, x1);
        const double j2 = bm::cyl_bessel_j(order, x2), dj2 = bm::cyl_bessel_j_prime(order, x2);
        const cplx h1(j1, y1), dh1(dj1, dy1);
        const cplx i_pow = std::pow(I_unit, order);
        // i^m J + a H = b J2,  k1 (i^m J' + a H') = nu k2 b J2'
        const cplx coeff =
            i_pow * (p.nu * p.k2 * j1 * dj2 - p.k1 * dj1 * j2) / (p.k1 * dh1 * j2 - p.nu * p.k2 * h1 * dj2);
        if (std::abs(coeff) < 1e-300) continue;
        for (int d = 0; d < n_dirs; ++d)
            out.values(d) += p.amplitude * scale * coeff * std::pow(-I_unit, order) *
                             std::exp(I_unit * double(m) * (out.angles[d] - incidence));
    }
    return out;
}

SolveOutcome solve_formulation(Formulation which, OperatorCache& cache, double tol, int n_dirs) {
    LinearSystem system = assemble(which, cache);
    SolveReport solve = gmres(system.matrix, system.rhs, tol);
    FarFieldPattern pattern = far_field(densities(system, solve.solution), cache.params(), cache.curve(), n_dirs);
    return {std::move(system), std::move(solve), std::move(pattern)};
}

Reference compute_reference(const ExperimentConfig& c) {
    validate(c);
    const Curve curve = make_curve(c.geometry);
    const ProblemParams params = problem_params(c);
    const bool analytic = c.reference == "analytic" || (c.reference == "auto" && is_circle(c.geometry));
    if (analytic)
        return {circle_far_field(params, circle_radius(curve), c.dirs), "analytic (separation of variables)"};
    const int largest = *std::max_element(c.unknowns.begin(), c.unknowns.end());
    const int n = unknowns_to_n(largest) * c.reference_factor;
    OperatorCache cache(params, curve, Grid(n), c.kappa_oversample);
    SolveOutcome outcome = solve_formulation(Formulation::SCFIE, cache, c.reference_tol, c.dirs);
    if (!outcome.solve.converged) throw ConfigError("reference solve did not converge");
    std::ostringstream desc;
    desc << "SCFIE n=" << n << " tol=" << format_double(c.reference_tol);
    return {std::move(outcome.pattern), desc.str()};
}

RunReport run_experiment(const ExperimentConfig& config) { return run_experiment(config, compute_reference(config)); }

RunReport run_experiment(const ExperimentConfig& c, const Reference& reference) {
    validate(c);
    const Curve curve = make_curve(c.geometry);
    const ProblemParams params = problem_params(c);
    RunReport report{c, reference.description, {}};
    for (int unknowns : c.unknowns) {
        const int n = unknowns_to_n(unknowns);
        OperatorCache cache(params, curve, Grid(n), c.kappa_oversample);
        for (Formulation f : c.formulations) {
            Cell cell;
            cell.formulation = f;
            cell.unknowns = unknowns;
            cell.n = n;
            cell.tolerance = gmres_tolerance(c, f);
            const auto start = std::chrono::steady_clock::now();
            try {
                const SolveOutcome outcome = solve_formulation(f, cache, cell.tolerance, c.dirs);
                cell.iterations = outcome.solve.iterations;
                cell.converged = outcome.solve.converged;
                cell.final_residual = outcome.solve.residual_history.back();
                cell.far_error = far_field_error(outcome.pattern, reference.pattern);
                cell.pattern = outcome.pattern;
            } catch (const std::exception& e) {
                cell.error = e.what();
                cell.far_error = std::numeric_limits<double>::quiet_NaN();
            }
            cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            report.cells.push_back(cell);
        }
    }
    return report;
}

ConvergenceReport convergence_study(const ExperimentConfig& config) {
    std::vector<int> ladder = config.unknowns;
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
    if (ladder.size() < 3) throw ConfigError("convergence study needs at least three unknown counts");
    ExperimentConfig sorted = config;
    sorted.unknowns = ladder;
    return convergence_study(run_experiment(sorted));
}

ConvergenceReport convergence_study(const RunReport& run) {
    ConvergenceReport out{run, {}, {}};
    for (Formulation f : run.config.formulations) {
        std::vector<const Cell*> cells;
        for (const Cell& cell : run.cells)
            if (cell.formulation == f) cells.push_back(&cell);
        std::sort(cells.begin(), cells.end(), [](const Cell* a, const Cell* b) { return a->unknowns < b->unknowns; });
        if (cells.size() < 3) throw ConfigError("convergence study needs at least three unknown counts");
        std::vector<double> orders;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            OrderRow row{f, cells[i]->unknowns, cells[i]->far_error, std::nullopt};
            if (i > 0) {
                const double ratio = cells[i - 1]->far_error / cells[i]->far_error;
                row.order = std::log(ratio) / std::log(double(cells[i]->unknowns) / cells[i - 1]->unknowns);
                orders.push_back(*row.order);
            }
            out.rows.push_back(row);
        }
        bool increasing = true;
        for (std::size_t i = 1; i < orders.size(); ++i)
            if (!(orders[i] > orders[i - 1])) increasing = false;
        if (increasing) out.superalgebraic.push_back(f);
    }
    return out;
}

namespace {

void write_provenance_csv(std::ostream& out, const RunReport& report) {
    out << "#version " << report.version << '\n';
    out << "#reference " << report.reference << '\n';
    std::istringstream lines(to_config_text(report.config));
    std::string line;
    while (std::getline(lines, line)) out << "#config " << line << '\n';
}

nlohmann::json provenance_json(const RunReport& report) {
    return {{"version", report.version}, {"reference", report.reference}, {"config", to_config_text(report.config)}};
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json cells_json(const RunReport& report) {
    nlohmann::json cells = nlohmann::json::array();
    for (const Cell& c : report.cells)
        cells.push_back({{"formulation", to_string(c.formulation)},
                         {"unknowns", c.unknowns},
                         {"n", c.n},
                         {"iterations", c.iterations},
                         {"converged", c.converged},
                         {"tolerance", c.tolerance},
                         {"far_error", number_or_null(c.far_error)},
                         {"final_residual", c.final_residual},
                         {"seconds", c.seconds},
                         {"error", c.error}});
    return cells;
}

} // namespace

void write_csv(std::ostream& out, const RunReport& report) {
    write_provenance_csv(out, report);
    out << "formulation,unknowns,n,iterations,converged,tolerance,far_error,final_residual,seconds,error\n";
    out << std::setprecision(6);
    for (const Cell& c : report.cells) {
        std::string error = c.error;
        std::replace(error.begin(), error.end(), ',', ';');
        out << to_string(c.formulation) << ',' << c.unknowns << ',' << c.n << ',' << c.iterations << ','
            << (c.converged ? 1 : 0) << ',' << c.tolerance << ',' << c.far_error << ',' << c.final_residual << ','
            << c.seconds << ',' << error << '\n';
    }
}

void write_json(std::ostream& out, const RunReport& report) {
    const nlohmann::json doc = {{"provenance", provenance_json(report)}, {"cells", cells_json(report)}};
    out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const ConvergenceReport& report) {
    write_csv(out, report.run);
    out << "#orders\nformulation,unknowns,far_error,order,superalgebraic\n";
    for (const OrderRow& row : report.rows) {
        const bool super = std::find(report.superalgebraic.begin(), report.superalgebraic.end(), row.formulation) !=
                           report.superalgebraic.end();
        out << to_string(row.formulation) << ',' << row.unknowns << ',' << row.error << ','
            << (row.order ? format_double(*row.order) : std::string()) << ',' << (super ? 1 : 0) << '\n';
    }
}

void write_json(std::ostream& out, const ConvergenceReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const OrderRow& row : report.rows)
        rows.push_back({{"formulation", to_string(row.formulation)},
                        {"unknowns", row.unknowns},
                        {"far_error", number_or_null(row.error)},
                        {"order", row.order ? number_or_null(*row.order) : nlohmann::json(nullptr)}});
    nlohmann::json super = nlohmann::json::array();
    for (Formulation f : report.superalgebraic) super.push_back(to_string(f));
    const nlohmann::json doc = {{"provenance", provenance_json(report.run)},
                                {"cells", cells_json(report.run)},
                                {"orders", rows},
                                {"superalgebraic", super}};
    out << doc.dump(2) << '\n';
}

ExperimentConfig config_from_report(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        const nlohmann::json doc = nlohmann::json::parse(t);
        return parse_config(doc.at("provenance").at("config").get<std::string>());
    }
    std::istringstream in(t);
    std::string line, config;
    const std::string tag = "#config ";
    while (std::getline(in, line))
        if (line.rfind(tag, 0) == 0) config += line.substr(tag.size()) + '\n';
    if (config.empty()) throw ConfigError("report carries no configuration block");
    return parse_config(config);
}

} // namespace nystrom
