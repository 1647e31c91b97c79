#include "mlambda/parse.hpp"

#include <charconv>
#include <cmath>

namespace mlambda {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string::npos) return out;
        start = pos + 1;
    }
}

double parse_real(const std::string& text) {
    std::string t = trim(text);
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw InputError("not a real number: '" + text + "'");
    return v;
}

// Coefficient of i: "", "+", "-" mean +-1.
double parse_imag(const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
}

long long parse_integer(const std::string& text) {
    std::string t = trim(text);
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw InputError("not an integer: '" + text + "'");
    return v;
}

struct Axis {
    std::vector<double> values;
};

Axis parse_axis(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw InputError("range must read lo:hi:step, got '" + text + "'");
    double lo = parse_real(parts[0]), hi = parse_real(parts[1]), step = parse_real(parts[2]);
    if (!(step > 0)) throw InputError("range step must be positive in '" + text + "'");
    if (hi < lo) throw InputError("range end below start in '" + text + "'");
    double n = std::floor((hi - lo) / step + 1e-9) + 1.0;
    if (n > double(kMaxGridCells)) throw InputError("grid exceeds " + std::to_string(kMaxGridCells) + " cells");
    Axis a;
    for (long long i = 0; i < static_cast<long long>(n); ++i) a.values.push_back(lo + double(i) * step);
    return a;
}

}  // namespace

Complex parse_complex(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw InputError("empty complex number");
    if (t.front() == '(') {
        if (t.back() != ')') throw InputError("unbalanced parenthesis in '" + text + "'");
        auto parts = split(t.substr(1, t.size() - 2), ';');
        if (parts.size() != 2) throw InputError("expected (re;im), got '" + text + "'");
        return {parse_real(parts[0]), parse_real(parts[1])};
    }
    if (t.back() != 'i') return {parse_real(t), 0.0};
    t.pop_back();
    // split at the last sign that is not an exponent sign
    std::size_t cut = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;)
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            cut = k;
            break;
        }
    if (cut == std::string::npos) return {0.0, parse_imag(t)};
    return {parse_real(t.substr(0, cut)), parse_imag(t.substr(cut))};
}

std::vector<Complex> parse_point(const std::string& text) {
    std::vector<Complex> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_complex(part));
    return out;
}

AffineForm parse_hyperplane(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos)
        throw InputError("hyperplane must read c1,..,cr:b, got '" + text + "'");
    auto coeffs = split(text.substr(0, colon), ',');
    Rational b;
    try {
        b = parse_rational(trim(text.substr(colon + 1)));
    } catch (const std::exception&) {
        throw InputError("hyperplane constant is not rational in '" + text + "'");
    }
    AffineForm h(coeffs.size(), -b);
    bool any = false;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        long long c = parse_integer(coeffs[i]);
        if (c != 0) {
            h = h + AffineForm::slot(coeffs.size(), i).scaled(c);
            any = true;
        }
    }
    if (!any) throw InputError("hyperplane needs a nonzero coefficient");
    return h;
}

ThetaPtr parse_theta_name(const std::string& text) {
    std::string t = trim(text);
    if (t.rfind("file:", 0) == 0) return load_theta_from_file(t.substr(5));
    if (t == "theta+") return make_builtin_theta("theta_plus");
    if (t == "theta-") return make_builtin_theta("theta_minus");
    if (t.rfind("jacobi:", 0) == 0) {
        std::string k = t.substr(7);
        if (k != "2" && k != "3" && k != "4") throw InputError("jacobi index must be 2, 3 or 4");
        return make_builtin_theta("jacobi" + k);
    }
    if (t.rfind("eisenstein:", 0) == 0) {
        long long k = parse_integer(t.substr(11));
        if (k < 4 || k % 2 != 0 || k > 64) throw InputError("eisenstein weight must be even, between 4 and 64");
        return make_builtin_theta("eisenstein", {static_cast<int>(k)});
    }
    for (const auto& name : builtin_names())
        if (name == t && name != "eisenstein") return make_builtin_theta(name);
    throw InputError("unknown theta '" + t + "'");
}

std::vector<ThetaPtr> parse_theta_tuple(const std::string& text) {
    std::vector<ThetaPtr> out;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) throw InputError("empty entry in theta tuple");
        out.push_back(parse_theta_name(part));
    }
    if (out.size() > kMaxTupleLength)
        throw InputError("theta tuple longer than " + std::to_string(kMaxTupleLength));
    return out;
}

std::vector<std::vector<Complex>> parse_grid(const std::string& text) {
    std::vector<std::vector<Complex>> axes;
    double cells = 1;
    for (const auto& slot : split(text, ',')) {
        std::vector<Complex> values;
        if (slot.find(':') == std::string::npos) {
            values.push_back(parse_complex(slot));
        } else {
            auto at = slot.find('@');
            Axis re = parse_axis(slot.substr(0, at));
            Axis im{{0.0}};
            if (at != std::string::npos) im = parse_axis(slot.substr(at + 1));
            for (double x : re.values)
                for (double y : im.values) values.push_back({x, y});
        }
        cells *= double(values.size());
        if (cells > double(kMaxGridCells))
            throw InputError("grid exceeds " + std::to_string(kMaxGridCells) + " cells");
        axes.push_back(std::move(values));
    }
    std::vector<std::vector<Complex>> points{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<Complex>> next;
        for (const auto& p : points)
            for (const auto& v : axis) {
                next.push_back(p);
                next.back().push_back(v);
            }
        points.swap(next);
    }
    return points;
}

}  // namespace mlambda
