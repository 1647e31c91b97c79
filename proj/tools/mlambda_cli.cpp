// mlambda: evaluate multiple completed L-functions of theta functions from the shell.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlambda/parse.hpp"
#include "mlambda/verify.hpp"

using namespace mlambda;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInput = 2, kPole = 3, kNumeric = 4, kMultiplicity = 5 };

struct Options {
    std::string theta;
    std::string point;
    std::string hyperplane;
    std::string at;
    std::string suite = "all";
    std::string format = "human";
    std::string out;
    double tol = EvalParams{}.abs_tol;
    int order = EvalParams{}.quad_order;
    int max_refine = EvalParams{}.max_refine;
    int trials = 20;
    std::uint64_t seed = 1;

    EvalParams params() const {
        EvalParams p;
        p.abs_tol = tol;
        p.quad_order = order;
        p.max_refine = max_refine;
        return p;
    }
    bool json() const { return format == "json"; }
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string cnum(Complex z) {
    if (z.imag() == 0) return num(z.real());
    return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

std::string full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<Complex> checked_point(const std::string& text, std::size_t arity) {
    auto s = parse_point(text);
    if (s.size() != arity)
        throw InputError("point has " + std::to_string(s.size()) + " slots, tuple has " + std::to_string(arity));
    return s;
}

json pole_json(const std::optional<std::pair<AffineForm, double>>& p) {
    if (!p) return nullptr;
    return {{"hyperplane", p->first.hyperplane_str()}, {"distance", p->second}};
}

int cmd_eval(const Options& o, std::ostream& out) {
    auto thetas = parse_theta_tuple(o.theta);
    auto e = cached_expression(thetas);
    auto s = checked_point(o.point, thetas.size());
    auto near = nearest_pole(*e, s);
    auto r = lambda_eval(*e, s, o.params());
    if (o.json()) {
        out << json{{"re", r.value.real()},
                    {"im", r.value.imag()},
                    {"err", r.err},
                    {"warnings", r.warnings},
                    {"nearest_pole", pole_json(near)}}
                   .dump(2)
            << "\n";
    } else if (o.format == "csv") {
        out << "re,im,err\n" << full(r.value.real()) << "," << full(r.value.imag()) << "," << full(r.err) << "\n";
    } else {
        out << "value  " << cnum(r.value) << "\n";
        out << "error  " << num(r.err) << "\n";
        if (near) out << "nearest pole  " << near->first.hyperplane_str() << "  (distance " << num(near->second) << ")\n";
        else out << "nearest pole  none\n";
        for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    }
    return kOk;
}

int cmd_residue(const Options& o, std::ostream& out) {
    auto thetas = parse_theta_tuple(o.theta);
    auto e = cached_expression(thetas);
    AffineForm h = parse_hyperplane(o.hyperplane);
    if (h.slots() != thetas.size())
        throw InputError("hyperplane has " + std::to_string(h.slots()) + " coefficients, tuple has " +
                         std::to_string(thetas.size()));
    auto s = checked_point(o.at, thetas.size());
    auto r = residue(*e, h, s, o.params());
    if (o.json()) {
        out << json{{"re", r.value.real()}, {"im", r.value.imag()}, {"err", r.err}, {"hyperplane", h.hyperplane_str()}}
                   .dump(2)
            << "\n";
    } else if (o.format == "csv") {
        out << "re,im,err\n" << full(r.value.real()) << "," << full(r.value.imag()) << "," << full(r.err) << "\n";
    } else {
        out << "residue along " << h.hyperplane_str() << "  " << cnum(r.value) << "\n";
        out << "error  " << num(r.err) << "\n";
    }
    return kOk;
}

int cmd_poles(const Options& o, std::ostream& out) {
    auto e = cached_expression(parse_theta_tuple(o.theta));
    const auto& hs = poles(*e);
    if (o.json()) {
        json arr = json::array();
        for (const auto& h : hs) arr.push_back(h.hyperplane_str());
        out << json{{"poles", arr}}.dump(2) << "\n";
    } else if (o.format == "csv") {
        out << "hyperplane\n";
        for (const auto& h : hs) out << h.hyperplane_str() << "\n";
    } else {
        if (hs.empty()) out << "no poles\n";
        for (const auto& h : hs) out << h.hyperplane_str() << "\n";
    }
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    VerifyOptions v;
    v.seed = o.seed;
    v.trials = o.trials;
    v.params = o.params();
    auto cases = run_verify_suite(o.suite, v);
    std::size_t failed = 0;
    for (const auto& c : cases) failed += !c.pass;
    if (o.json()) {
        json arr = json::array();
        for (const auto& c : cases)
            arr.push_back({{"suite", c.suite},
                           {"name", c.name},
                           {"defect", c.defect},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
        out << json{{"suite", o.suite},
                    {"seed", o.seed},
                    {"trials", o.trials},
                    {"cases", arr},
                    {"passed", cases.size() - failed},
                    {"failed", failed}}
                   .dump(2)
            << "\n";
    } else if (o.format == "csv") {
        out << "suite,name,defect,tolerance,pass\n";
        for (const auto& c : cases)
            out << c.suite << ",\"" << c.name << "\"," << full(c.defect) << "," << full(c.tolerance) << ","
                << (c.pass ? 1 : 0) << "\n";
    } else {
        for (const auto& c : cases)
            out << (c.pass ? "PASS  " : "FAIL  ") << c.suite << ": " << c.name << "  defect " << num(c.defect)
                << " (tol " << num(c.tolerance) << ")\n";
        out << cases.size() - failed << "/" << cases.size() << " passed\n";
    }
    return failed ? kVerifyFailed : kOk;
}

int cmd_table(const Options& o, std::ostream& out) {
    auto thetas = parse_theta_tuple(o.theta);
    auto e = cached_expression(thetas);
    auto grid = parse_grid(o.point);
    if (grid.front().size() != thetas.size())
        throw InputError("grid has " + std::to_string(grid.front().size()) + " slots, tuple has " +
                         std::to_string(thetas.size()));
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto rows = lambda_eval_many(*e, grid, o.params(), threads);
    if (o.json()) {
        json arr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            json s = json::array();
            for (const auto& z : grid[i]) s.push_back({z.real(), z.imag()});
            json row{{"s", s}, {"pole", bool(rows[i].pole)}};
            if (!rows[i].pole && rows[i].error.empty()) {
                row["re"] = rows[i].result.value.real();
                row["im"] = rows[i].result.value.imag();
                row["err"] = rows[i].result.err;
            }
            if (!rows[i].pole && !rows[i].error.empty()) row["error"] = rows[i].error;
            arr.push_back(row);
        }
        out << json{{"rows", arr}}.dump(2) << "\n";
        return kOk;
    }
    for (std::size_t k = 1; k <= thetas.size(); ++k) out << "s" << k << "_re,s" << k << "_im,";
    out << "re,im,err,pole\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& z : grid[i]) out << full(z.real()) << "," << full(z.imag()) << ",";
        const auto& r = rows[i];
        if (r.pole || !r.error.empty()) {
            out << "nan,nan,nan," << (r.pole ? 1 : 0) << "\n";
            if (!r.pole && !r.error.empty()) std::cerr << "row " << i << ": " << r.error << "\n";
        } else {
            out << full(r.result.value.real()) << "," << full(r.result.value.imag()) << "," << full(r.result.err)
                << ",0\n";
        }
    }
    return kOk;
}

int cmd_list(const Options& o, std::ostream& out) {
    std::vector<std::pair<std::string, ThetaPtr>> entries;
    for (const char* spec : {"riemann", "eisenstein:4", "eisenstein:6", "delta", "theta+", "theta-", "jacobi:2",
                             "jacobi:3", "jacobi:4"})
        entries.emplace_back(spec, parse_theta_name(spec));
    if (o.json()) {
        json arr = json::array();
        for (const auto& [spec, f] : entries)
            arr.push_back({{"spec", spec},
                           {"name", f->name},
                           {"weight", rational_str(f->weight)},
                           {"sign", f->sign},
                           {"dual", f->dual().name},
                           {"kernel_power", f->kernel_p},
                           {"critical_values", critical_values(*f)}});
        out << json{{"thetas", arr}}.dump(2) << "\n";
        return kOk;
    }
    if (o.format == "csv") out << "spec,name,weight,sign,dual,kernel_power,critical\n";
    for (const auto& [spec, f] : entries) {
        auto crit = critical_values(*f);
        std::string range = crit.empty() ? "none" : std::to_string(crit.front()) + ".." + std::to_string(crit.back());
        if (o.format == "csv")
            out << spec << "," << f->name << "," << rational_str(f->weight) << "," << f->sign << "," << f->dual().name
                << "," << f->kernel_p << "," << range << "\n";
        else
            out << spec << "  weight " << rational_str(f->weight) << "  sign " << (f->sign > 0 ? "+" : "-")
                << "  dual " << f->dual().name << "  critical " << range << "\n";
    }
    if (o.format != "csv") out << "eisenstein:<2k> accepts even weights 4..64; file:<path> loads a theta file\n";
    return kOk;
}

int report(const Options& o, int code, const std::string& kind, const std::string& msg, json extra = json::object()) {
    if (o.json()) {
        extra["error"] = kind;
        extra["message"] = msg;
        std::cout << extra.dump(2) << "\n";
    }
    std::cerr << "mlambda: " << kind << ": " << msg << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple completed L-functions of theta functions"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--tol", o.tol, "absolute tolerance")->check(CLI::PositiveNumber);
        c->add_option("--order", o.order, "Gauss nodes per panel")->check(CLI::Range(4, 256));
        c->add_option("--max-refine", o.max_refine, "panel refinement limit")->check(CLI::Range(0, 20));
        c->add_option("--format", o.format, "human, json or csv")->check(CLI::IsMember({"human", "json", "csv"}));
        c->add_option("--out", o.out, "write output to this file");
    };

    auto* eval = app.add_subcommand("eval", "evaluate Lambda at a point");
    eval->add_option("--theta", o.theta, "theta tuple, e.g. riemann,delta")->required();
    eval->add_option("--s", o.point, "point, e.g. 2,1+0.5i")->required();
    add_common(eval);

    auto* res = app.add_subcommand("residue", "residue along c1 s1 + ... + cr sr = b");
    res->add_option("--theta", o.theta, "theta tuple")->required();
    res->add_option("--hyperplane", o.hyperplane, "c1,..,cr:b")->required();
    res->add_option("--at", o.at, "point on the hyperplane")->required();
    add_common(res);

    auto* pol = app.add_subcommand("poles", "list pole hyperplanes");
    pol->add_option("--theta", o.theta, "theta tuple")->required();
    add_common(pol);

    auto* ver = app.add_subcommand("verify", "run identity and oracle suites");
    ver->add_option("--suite", o.suite, "suite name or all");
    ver->add_option("--trials", o.trials, "random points per family")->check(CLI::Range(1, 10000));
    ver->add_option("--seed", o.seed, "random seed");
    add_common(ver);

    auto* tab = app.add_subcommand("table", "evaluate on a grid");
    tab->add_option("--theta", o.theta, "theta tuple")->required();
    tab->add_option("--s", o.point, "grid, per slot lo:hi:step[@imlo:imhi:imstep]")->required();
    add_common(tab);

    auto* lst = app.add_subcommand("list-thetas", "list builtin theta functions");
    add_common(lst);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    std::ostringstream buf;
    int code = kOk;
    try {
        if (eval->parsed()) code = cmd_eval(o, buf);
        else if (res->parsed()) code = cmd_residue(o, buf);
        else if (pol->parsed()) code = cmd_poles(o, buf);
        else if (ver->parsed()) code = cmd_verify(o, buf);
        else if (tab->parsed()) code = cmd_table(o, buf);
        else code = cmd_list(o, buf);
    } catch (const PoleError& e) {
        return report(o, kPole, "pole", e.what(), {{"hyperplane", e.hyperplane.hyperplane_str()}, {"distance", e.distance}});
    } catch (const IntersectionError& e) {
        return report(o, kPole, "pole", e.what());
    } catch (const MultiplicityError& e) {
        if (!o.json())
            for (const auto& t : e.terms) std::cerr << "  term " << t << "\n";
        return report(o, kMultiplicity, "multiplicity", e.what(), {{"terms", e.terms}});
    } catch (const ConvergenceError& e) {
        return report(o, kNumeric, "numeric", e.what());
    } catch (const QuadratureError& e) {
        return report(o, kNumeric, "numeric", e.what());
    } catch (const TruncationError& e) {
        return report(o, kNumeric, "numeric", e.what());
    } catch (const OracleError& e) {
        return report(o, kNumeric, "numeric", e.what());
    } catch (const ParseError& e) {
        return report(o, kInput, "input", e.what());
    } catch (const ValidationError& e) {
        return report(o, kInput, "input", e.what());
    } catch (const StructuralError& e) {
        return report(o, kInput, "input", e.what());
    } catch (const std::invalid_argument& e) {
        return report(o, kInput, "input", e.what());
    } catch (const std::exception& e) {
        return report(o, kNumeric, "numeric", e.what());
    }

    if (o.out.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) return report(o, kInput, "input", "cannot open '" + o.out + "' for writing");
        f << buf.str();
    }
    return code;
}
