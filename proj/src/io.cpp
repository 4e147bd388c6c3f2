#include "hilbmod/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace hilbmod::io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw ParseError("at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed, bool lenient) {
    if (!j.is_object()) schema_error(path, "expected an object");
    if (lenient) return;
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key)) schema_error(path + "/" + key, "unknown field (use --lenient to ignore)");
}

double read_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path, "expected a number");
    return j.get<double>();
}

int read_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema_error(path, "expected an integer");
    return j.get<int>();
}

cplx read_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) schema_error(path, "expected an [re, im] pair");
    return {read_number(j[0], path + "/0"), read_number(j[1], path + "/1")};
}

CMatrix read_matrix(const json& j, const std::string& path, Eigen::Index rows, Eigen::Index cols) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
        schema_error(path, "expected " + std::to_string(rows) + " rows");
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        const std::string rpath = path + "/" + std::to_string(i);
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            schema_error(rpath, "expected " + std::to_string(cols) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = read_complex(row[static_cast<std::size_t>(c)], rpath + "/" + std::to_string(c));
    }
    return m;
}

std::vector<CMatrix> read_blocks(const json& j, const std::string& path, const std::vector<int>& sizes, int k,
                                 bool square) {
    if (!j.is_array() || j.size() != sizes.size())
        schema_error(path, "expected " + std::to_string(sizes.size()) + " blocks");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const Eigen::Index rows = static_cast<Eigen::Index>(k) * sizes[i];
        out.push_back(read_matrix(j[i], path + "/" + std::to_string(i), rows, square ? rows : sizes[i]));
    }
    return out;
}

json write_complex(cplx z) { return json::array({z.real(), z.imag()}); }

json write_matrix(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(write_complex(m(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json write_blocks(const std::vector<CMatrix>& blocks) {
    json out = json::array();
    for (const auto& b : blocks) out.push_back(write_matrix(b));
    return out;
}

/// Non-finite values travel as null and come back as +inf.
json write_real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_real(const json& j, const std::string& path) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return read_number(j, path);
}

bool blocks_equal(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) return false;
        if (a[i] != b[i]) return false;
    }
    return true;
}

bool opt_blocks_equal(const std::optional<std::vector<CMatrix>>& a, const std::optional<std::vector<CMatrix>>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || blocks_equal(*a, *b);
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte index one past the offending character
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        throw ParseError(line_column(text, at) + ": " + e.what());
    }
}

json generators_to_json(const GeneratorList& g) {
    json gens = json::array();
    for (const auto& blocks : g.generators) gens.push_back(write_blocks(blocks));
    return {{"dims", g.dims}, {"count", g.count}, {"generators", gens}};
}

GeneratorList generators_from_json(const json& j, const std::string& path, const ProblemFile& p) {
    check_keys(j, path, {"dims", "count", "generators"}, false);
    GeneratorList g;
    g.dims = j.at("dims").get<std::vector<int>>();
    g.count = read_int(j.at("count"), path + "/count");
    const json& gens = j.at("generators");
    for (std::size_t t = 0; t < gens.size(); ++t)
        g.generators.push_back(read_blocks(gens[t], path + "/generators/" + std::to_string(t), p.blocks, p.k, false));
    return g;
}

}  // namespace

ModuleShape ProblemFile::shape() const { return {BlockProfile(blocks), k}; }

ModuleOperator ProblemFile::op() const { return {shape(), c}; }

ModuleElement ProblemFile::rhs() const {
    if (!f) throw InvalidParameter("problem has no right-hand side f");
    return {shape(), *f};
}

bool operator==(const ProblemFile& a, const ProblemFile& b) {
    return a.blocks == b.blocks && a.k == b.k && blocks_equal(a.c, b.c) && a.lambda == b.lambda &&
           opt_blocks_equal(a.f, b.f) && a.rank_tol == b.rank_tol && a.solve_tol == b.solve_tol;
}

ProblemFile problem_from_operator(const ModuleOperator& c, cplx lambda) {
    ProblemFile p;
    p.blocks = c.shape().profile().sizes();
    p.k = c.shape().k();
    p.c.assign(c.blocks().begin(), c.blocks().end());
    p.lambda = lambda;
    return p;
}

ProblemFile problem_from_json(const json& j, bool lenient) {
    check_keys(j, "", {"blocks", "k", "C", "lambda", "f", "tolerances"}, lenient);
    ProblemFile p;
    if (!j.contains("blocks")) schema_error("/blocks", "missing required field");
    if (!j.contains("k")) schema_error("/k", "missing required field");
    if (!j.contains("C")) schema_error("/C", "missing required field");
    const json& blocks = j["blocks"];
    if (!blocks.is_array() || blocks.empty()) schema_error("/blocks", "expected a nonempty array of block sizes");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const int n = read_int(blocks[i], "/blocks/" + std::to_string(i));
        if (n < 1) schema_error("/blocks/" + std::to_string(i), "block size must be >= 1");
        p.blocks.push_back(n);
    }
    p.k = read_int(j["k"], "/k");
    if (p.k < 1) schema_error("/k", "k must be >= 1");
    p.c = read_blocks(j["C"], "/C", p.blocks, p.k, true);
    if (j.contains("lambda")) p.lambda = read_complex(j["lambda"], "/lambda");
    if (j.contains("f")) p.f = read_blocks(j["f"], "/f", p.blocks, p.k, false);
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        check_keys(t, "/tolerances", {"rank", "solve"}, lenient);
        if (t.contains("rank")) p.rank_tol = read_number(t["rank"], "/tolerances/rank");
        if (t.contains("solve")) p.solve_tol = read_number(t["solve"], "/tolerances/solve");
        if (p.rank_tol && *p.rank_tol < 0.0) schema_error("/tolerances/rank", "must be >= 0");
        if (p.solve_tol && !(*p.solve_tol > 0.0)) schema_error("/tolerances/solve", "must be > 0");
    }
    return p;
}

ProblemFile parse_problem(std::string_view text, bool lenient) { return problem_from_json(parse_json_text(text), lenient); }

json problem_to_json(const ProblemFile& p) {
    json j = {{"blocks", p.blocks}, {"k", p.k}, {"C", write_blocks(p.c)}, {"lambda", write_complex(p.lambda)}};
    if (p.f) j["f"] = write_blocks(*p.f);
    if (p.rank_tol || p.solve_tol) {
        json t = json::object();
        if (p.rank_tol) t["rank"] = *p.rank_tol;
        if (p.solve_tol) t["solve"] = *p.solve_tol;
        j["tolerances"] = t;
    }
    return j;
}

GeneratorList generator_list(const KernelData& k) {
    GeneratorList g{.dims = k.dims, .count = k.count(), .generators = {}};
    for (const auto& x : k.generators) g.generators.emplace_back(x.blocks().begin(), x.blocks().end());
    return g;
}

bool operator==(const GeneratorList& a, const GeneratorList& b) {
    if (a.dims != b.dims || a.count != b.count || a.generators.size() != b.generators.size()) return false;
    for (std::size_t i = 0; i < a.generators.size(); ++i)
        if (!blocks_equal(a.generators[i], b.generators[i])) return false;
    return true;
}

bool operator==(const AnalysisSection& a, const AnalysisSection& b) {
    return a.r == b.r && a.kernel_dims == b.kernel_dims && a.range_dims == b.range_dims && a.kernel_l == b.kernel_l &&
           a.kernel_lr == b.kernel_lr && a.range_lr_dims == b.range_lr_dims && a.ep == b.ep &&
           a.ep_residual == b.ep_residual && a.decomposition_residual == b.decomposition_residual &&
           a.theta_residual == b.theta_residual && a.c_r_residual == b.c_r_residual &&
           a.projector_gap == b.projector_gap && a.matrix_form_annihilation == b.matrix_form_annihilation &&
           a.matrix_form_invertible == b.matrix_form_invertible &&
           a.matrix_form_condition == b.matrix_form_condition &&
           a.matrix_form_identity_gap == b.matrix_form_identity_gap;
}

bool operator==(const SolveSection& a, const SolveSection& b) {
    return a.solvable == b.solvable && a.injective == b.injective && a.residual_range_test == b.residual_range_test &&
           a.residual_orthogonality_test == b.residual_orthogonality_test &&
           opt_blocks_equal(a.particular_solution, b.particular_solution) &&
           a.solution_norm_bound == b.solution_norm_bound && a.kernel_l == b.kernel_l;
}

bool operator==(const ReportFile& a, const ReportFile& b) {
    return a.tool == b.tool && a.version == b.version && a.command == b.command && a.input == b.input &&
           a.rank_tol == b.rank_tol && a.solve_tol == b.solve_tol && a.analysis == b.analysis &&
           a.solve == b.solve && a.timing_ms == b.timing_ms;
}

json report_to_json(const ReportFile& r) {
    json j = {{"tool", r.tool},           {"version", r.version},     {"command", r.command},
              {"input", problem_to_json(r.input)}, {"tolerance", {{"rank", r.rank_tol}, {"solve", r.solve_tol}}},
              {"timing_ms", r.timing_ms}};
    if (r.analysis) {
        const auto& a = *r.analysis;
        j["analysis"] = {
            {"r", a.r},
            {"kernel_dims", a.kernel_dims},
            {"range_dims", a.range_dims},
            {"kernel_L", generators_to_json(a.kernel_l)},
            {"kernel_Lr", generators_to_json(a.kernel_lr)},
            {"range_Lr_dims", a.range_lr_dims},
            {"ep", a.ep},
            {"ep_residual", write_real(a.ep_residual)},
            {"decomposition_residual", write_real(a.decomposition_residual)},
            {"theta_residual", write_real(a.theta_residual)},
            {"c_r_residual", write_real(a.c_r_residual)},
            {"projector_gap", write_real(a.projector_gap)},
            {"matrix_form",
             {{"annihilation", write_real(a.matrix_form_annihilation)},
              {"invertible", a.matrix_form_invertible},
              {"condition", write_real(a.matrix_form_condition)},
              {"identity_gap", write_real(a.matrix_form_identity_gap)}}},
        };
    }
    if (r.solve) {
        const auto& s = *r.solve;
        json js = {{"solvable", s.solvable},
                   {"injective", s.injective},
                   {"residual_range_test", write_real(s.residual_range_test)},
                   {"residual_orthogonality_test", write_real(s.residual_orthogonality_test)},
                   {"kernel_L", generators_to_json(s.kernel_l)}};
        if (s.particular_solution) js["particular_solution"] = write_blocks(*s.particular_solution);
        if (s.solution_norm_bound) js["solution_norm_bound"] = write_real(*s.solution_norm_bound);
        j["solve"] = js;
    }
    return j;
}

ReportFile report_from_json(const json& j) {
    check_keys(j, "", {"tool", "version", "command", "input", "tolerance", "timing_ms", "analysis", "solve"}, false);
    ReportFile r;
    try {
        r.tool = j.at("tool").get<std::string>();
        r.version = j.at("version").get<std::string>();
        r.command = j.at("command").get<std::string>();
        r.input = problem_from_json(j.at("input"));
        r.rank_tol = read_number(j.at("tolerance").at("rank"), "/tolerance/rank");
        r.solve_tol = read_number(j.at("tolerance").at("solve"), "/tolerance/solve");
        r.timing_ms = read_number(j.at("timing_ms"), "/timing_ms");
        if (j.contains("analysis")) {
            const json& ja = j["analysis"];
            AnalysisSection a;
            a.r = read_int(ja.at("r"), "/analysis/r");
            a.kernel_dims = ja.at("kernel_dims").get<std::vector<std::vector<int>>>();
            a.range_dims = ja.at("range_dims").get<std::vector<std::vector<int>>>();
            a.kernel_l = generators_from_json(ja.at("kernel_L"), "/analysis/kernel_L", r.input);
            a.kernel_lr = generators_from_json(ja.at("kernel_Lr"), "/analysis/kernel_Lr", r.input);
            a.range_lr_dims = ja.at("range_Lr_dims").get<std::vector<int>>();
            a.ep = ja.at("ep").get<bool>();
            a.ep_residual = read_real(ja.at("ep_residual"), "/analysis/ep_residual");
            a.decomposition_residual = read_real(ja.at("decomposition_residual"), "/analysis/decomposition_residual");
            a.theta_residual = read_real(ja.at("theta_residual"), "/analysis/theta_residual");
            a.c_r_residual = read_real(ja.at("c_r_residual"), "/analysis/c_r_residual");
            a.projector_gap = read_real(ja.at("projector_gap"), "/analysis/projector_gap");
            const json& mf = ja.at("matrix_form");
            a.matrix_form_annihilation = read_real(mf.at("annihilation"), "/analysis/matrix_form/annihilation");
            a.matrix_form_invertible = mf.at("invertible").get<bool>();
            a.matrix_form_condition = read_real(mf.at("condition"), "/analysis/matrix_form/condition");
            a.matrix_form_identity_gap = read_real(mf.at("identity_gap"), "/analysis/matrix_form/identity_gap");
            r.analysis = std::move(a);
        }
        if (j.contains("solve")) {
            const json& js = j["solve"];
            SolveSection s;
            s.solvable = js.at("solvable").get<bool>();
            s.injective = js.at("injective").get<bool>();
            s.residual_range_test = read_real(js.at("residual_range_test"), "/solve/residual_range_test");
            s.residual_orthogonality_test =
                read_real(js.at("residual_orthogonality_test"), "/solve/residual_orthogonality_test");
            s.kernel_l = generators_from_json(js.at("kernel_L"), "/solve/kernel_L", r.input);
            if (js.contains("particular_solution"))
                s.particular_solution =
                    read_blocks(js["particular_solution"], "/solve/particular_solution", r.input.blocks, r.input.k, false);
            if (js.contains("solution_norm_bound"))
                s.solution_norm_bound = read_real(js["solution_norm_bound"], "/solve/solution_norm_bound");
            r.solve = std::move(s);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    return r;
}

ReportFile parse_report(std::string_view text) { return report_from_json(parse_json_text(text)); }

namespace {

std::string fmt_complex(cplx z) {
    std::ostringstream os;
    os << std::setprecision(6) << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string fmt_dims(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

std::string fmt_element(const std::vector<CMatrix>& blocks) {
    std::ostringstream os;
    os << std::setprecision(6);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        os << "      block " << i << ":\n";
        for (Eigen::Index r = 0; r < blocks[i].rows(); ++r) {
            os << "        ";
            for (Eigen::Index c = 0; c < blocks[i].cols(); ++c) os << (c ? "  " : "") << fmt_complex(blocks[i](r, c));
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace

std::string report_to_text(const ReportFile& r, bool color) {
    const auto paint = [color](bool good, const std::string& s) {
        if (!color) return s;
        return std::string(good ? "\033[32m" : "\033[31m") + s + "\033[0m";
    };
    std::ostringstream os;
    os << std::setprecision(6);
    os << r.tool << " " << r.version << " " << r.command << "\n";
    os << "  algebra blocks " << fmt_dims(r.input.blocks) << ", k = " << r.input.k
       << ", lambda = " << fmt_complex(r.input.lambda) << "\n";
    os << "  tolerance: rank " << r.rank_tol << (r.rank_tol == 0.0 ? " (auto)" : "") << ", solve " << r.solve_tol
       << "\n";
    if (r.analysis) {
        const auto& a = *r.analysis;
        os << "  Riesz index r = " << a.r << "\n";
        for (std::size_t i = 0; i < a.kernel_dims.size(); ++i)
            os << "    block " << i << ": dim Ker(L^n) " << fmt_dims(a.kernel_dims[i]) << ", dim Ran(L^n) "
               << fmt_dims(a.range_dims[i]) << "\n";
        os << "  Ker(L):   " << a.kernel_l.count << " generator(s), dims " << fmt_dims(a.kernel_l.dims) << "\n";
        os << "  Ker(L^r): " << a.kernel_lr.count << " generator(s), dims " << fmt_dims(a.kernel_lr.dims)
           << "; Ran(L^r) dims " << fmt_dims(a.range_lr_dims) << "\n";
        os << "  L^r EP: " << paint(a.ep, a.ep ? "yes" : "no") << " (commutator " << a.ep_residual
           << ", ||Pi_Ker + Pi_Ran - I|| " << a.decomposition_residual << ")\n";
        os << "  projector P: theta-sum residual " << a.theta_residual << ", gap to oblique projector "
           << a.projector_gap << "\n";
        os << "  C_r identity residual " << a.c_r_residual << "\n";
        os << "  matrix form: ||L^r P|| " << a.matrix_form_annihilation << ", compression "
           << paint(a.matrix_form_invertible, a.matrix_form_invertible ? "invertible" : "singular") << " (cond "
           << a.matrix_form_condition << ", ||X - I|| " << a.matrix_form_identity_gap << ")\n";
    }
    if (r.solve) {
        const auto& s = *r.solve;
        os << "  solvable: " << paint(s.solvable, s.solvable ? "yes" : "no") << " (range residual "
           << s.residual_range_test << ", Ker(L*) residual " << s.residual_orthogonality_test << ")\n";
        os << "  injective: " << (s.injective ? "yes" : "no");
        if (s.solution_norm_bound) os << ", ||L^-1|| = " << *s.solution_norm_bound;
        os << "\n";
        if (s.particular_solution) os << "  particular solution x0:\n" << fmt_element(*s.particular_solution);
        os << "  Ker(L): " << s.kernel_l.count << " generator(s)\n";
        for (std::size_t g = 0; g < s.kernel_l.generators.size(); ++g)
            os << "    x_" << g + 1 << ":\n" << fmt_element(s.kernel_l.generators[g]);
    }
    os << "  time " << r.timing_ms << " ms\n";
    return os.str();
}

}  // namespace hilbmod::io
