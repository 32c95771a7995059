#include "solitons/profiles.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "solitons/expression.hpp"
#include "solitons/interp.hpp"

namespace solitons {

const char* to_string(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::rotation: return "rotation";
        case ProfileFamily::translation: return "translation";
        case ProfileFamily::dilation: return "dilation";
        case ProfileFamily::custom: return "custom";
    }
    return "?";
}

ProfileFamily profile_family_from_string(const std::string& name) {
    if (name == "rotation") return ProfileFamily::rotation;
    if (name == "translation") return ProfileFamily::translation;
    if (name == "dilation") return ProfileFamily::dilation;
    if (name == "custom") return ProfileFamily::custom;
    throw ValidationError("unknown profile family '" + name + "'");
}

SubmersionProfile::SubmersionProfile(int n, double lo, double hi, ScalarFn alpha,
                                     ScalarFn alpha_prime, ScalarFn phi_hat,
                                     ScalarFn phi_hat_prime, ScalarFn h, ProfileFamily label)
    : n_(n),
      lo_(lo),
      hi_(hi),
      alpha_(std::move(alpha)),
      alpha_prime_(std::move(alpha_prime)),
      phi_hat_(std::move(phi_hat)),
      phi_hat_prime_(std::move(phi_hat_prime)),
      h_(std::move(h)),
      label_(label) {
    if (n_ < 2) throw ValidationError("SubmersionProfile: n must be >= 2, got " + std::to_string(n_));
    if (!(lo_ < hi_)) throw ValidationError("SubmersionProfile: empty domain");
    validate();
}

void SubmersionProfile::require_interior(double s) const {
    if (!(s > lo_ && s < hi_)) {
        std::ostringstream os;
        os << "profile '" << to_string(label_) << "': s = " << s
           << " is outside the open domain (" << lo_ << ", " << hi_ << ")";
        throw ValidationError(os.str());
    }
}

std::pair<double, double> SubmersionProfile::validation_window() const {
    const double hi = std::isinf(hi_) ? lo_ + 20.0 : hi_;
    const double margin = (hi - lo_) / 200.0;
    return {lo_ + margin, hi - margin};
}

void SubmersionProfile::validate() const {
    const auto [wlo, whi] = validation_window();
    const int samples = 100;
    for (int k = 0; k < samples; ++k) {
        const double s = wlo + (whi - wlo) * k / (samples - 1);
        const double a = alpha_(s);
        const double p = phi_hat_(s);
        std::ostringstream os;
        if (!(a > 0.0) || !is_finite(a)) {
            os << "profile validation: alpha(" << s << ") = " << a << " is not positive";
            throw ValidationError(os.str());
        }
        if (!(p > 0.0) || !is_finite(p)) {
            os << "profile validation: phi_hat(" << s << ") = " << p << " is not positive";
            throw ValidationError(os.str());
        }
        if (!is_finite(h_(s))) {
            os << "profile validation: h(" << s << ") is not finite";
            throw ValidationError(os.str());
        }
        // Derivative closures must agree with central differences.
        const double step = 1e-6 * (1.0 + std::abs(s));
        if (s - step > lo_ && s + step < hi_) {
            const double fd_a = (alpha_(s + step) - alpha_(s - step)) / (2 * step);
            const double fd_p = (phi_hat_(s + step) - phi_hat_(s - step)) / (2 * step);
            if (rel_err(alpha_prime_(s), fd_a) > 1e-6) {
                os << "profile validation: alpha_prime(" << s << ") disagrees with central difference";
                throw ValidationError(os.str());
            }
            if (rel_err(phi_hat_prime_(s), fd_p) > 1e-6) {
                os << "profile validation: phi_hat_prime(" << s
                   << ") disagrees with central difference";
                throw ValidationError(os.str());
            }
        }
    }
}

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dimension(int n, const char* who) {
    if (n < 2)
        throw ValidationError(std::string(who) + ": n must be >= 2, got " + std::to_string(n));
}
}  // namespace

SubmersionProfile rotator_profile(int n) {
    require_dimension(n, "rotator_profile");
    const double m = n - 1;
    return SubmersionProfile(
        n, 0.0, kInf,
        [](double s) { return 1.0 / (1.0 + s * s); },
        [](double s) {
            const double d = 1.0 + s * s;
            return -2.0 * s / (d * d);
        },
        [](double s) { return s * s; }, [](double s) { return 2.0 * s; },
        [m](double s) { return m * s / std::sqrt(1.0 + s * s); }, ProfileFamily::rotation);
}

SubmersionProfile translator_profile(int n) {
    require_dimension(n, "translator_profile");
    const double m = n - 1;
    return SubmersionProfile(
        n, 0.0, kInf, [](double s) { return 1.0 / (s * s); },
        [](double s) { return -2.0 / (s * s * s); }, [](double s) { return 1.0 / (s * s); },
        [](double s) { return -2.0 / (s * s * s); }, [m](double) { return -m; },
        ProfileFamily::translation);
}

SubmersionProfile dilation_profile(int n) {
    require_dimension(n, "dilation_profile");
    const double m = n - 1;
    return SubmersionProfile(
        n, 0.0, 1.0, [](double s) { return 1.0 / (1.0 - s * s); },
        [](double s) {
            const double d = 1.0 - s * s;
            return 2.0 * s / (d * d);
        },
        [](double s) { return 1.0 / (s * s); }, [](double s) { return -2.0 / (s * s * s); },
        [m](double s) { return -2.0 * m * s / std::sqrt(1.0 - s * s); }, ProfileFamily::dilation);
}

SubmersionProfile profile_for(ProfileFamily family, int n) {
    switch (family) {
        case ProfileFamily::rotation: return rotator_profile(n);
        case ProfileFamily::translation: return translator_profile(n);
        case ProfileFamily::dilation: return dilation_profile(n);
        case ProfileFamily::custom:
            throw ValidationError("profile_for: custom profiles need an explicit spec");
    }
    throw ValidationError("profile_for: bad family");
}

namespace {

struct CompiledField {
    ScalarFn value;
    ScalarFn derivative;
};

// Compile one field into (value, derivative) closures. Analytic derivatives
// are used when given; otherwise the derivative is a central difference of
// the value closure, which degrades gracefully for tabulated data.
CompiledField compile_field(const ProfileField& field, double n, const std::string& name) {
    CompiledField out;
    if (field.expression) {
        auto expr = std::make_shared<Expression>(Expression::parse(*field.expression));
        out.value = [expr, n](double s) { return expr->eval(s, n); };
    } else if (!field.samples.empty()) {
        if (field.samples.size() < 4)
            throw ValidationError("custom profile field '" + name + "': need >= 4 samples");
        std::vector<double> xs, ys;
        xs.reserve(field.samples.size());
        ys.reserve(field.samples.size());
        for (auto& [x, y] : field.samples) {
            xs.push_back(x);
            ys.push_back(y);
        }
        auto spline = std::make_shared<CubicHermite>(monotone_cubic(std::move(xs), std::move(ys)));
        out.value = [spline](double s) { return spline->eval(s); };
        out.derivative = [spline](double s) { return spline->derivative(s); };
    } else {
        throw ValidationError("custom profile field '" + name + "': no expression or samples");
    }
    if (field.derivative_expression) {
        auto dexpr = std::make_shared<Expression>(Expression::parse(*field.derivative_expression));
        out.derivative = [dexpr, n](double s) { return dexpr->eval(s, n); };
    }
    if (!out.derivative) {
        ScalarFn value = out.value;
        out.derivative = [value](double s) {
            const double step = 1e-6 * (1.0 + std::abs(s));
            return (value(s + step) - value(s - step)) / (2 * step);
        };
    }
    return out;
}

}  // namespace

SubmersionProfile custom_profile(const ProfileSpec& spec) {
    require_dimension(spec.n, "custom_profile");
    if (!(spec.domain_lo < spec.domain_hi))
        throw ValidationError("custom_profile: domain must satisfy lo < hi");
    const double n = spec.n;
    CompiledField a = compile_field(spec.alpha, n, "alpha");
    CompiledField p = compile_field(spec.phi_hat, n, "phi_hat");
    CompiledField h = compile_field(spec.h, n, "h");
    return SubmersionProfile(spec.n, spec.domain_lo, spec.domain_hi, a.value, a.derivative,
                             p.value, p.derivative, h.value, ProfileFamily::custom);
}

namespace {

ProfileField parse_field(const nlohmann::json& j, const std::string& name) {
    ProfileField f;
    if (j.is_string()) {
        f.expression = j.get<std::string>();
    } else if (j.is_array()) {
        for (auto& row : j) {
            if (!row.is_array() || row.size() != 2)
                throw ValidationError("custom profile field '" + name +
                                      "': samples must be [s, value] pairs");
            f.samples.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
    } else if (j.is_object()) {
        if (!j.contains("expr"))
            throw ValidationError("custom profile field '" + name + "': object form needs 'expr'");
        f.expression = j.at("expr").get<std::string>();
        if (j.contains("derivative")) f.derivative_expression = j.at("derivative").get<std::string>();
    } else {
        throw ValidationError("custom profile field '" + name + "': unsupported JSON type");
    }
    return f;
}

}  // namespace

SubmersionProfile custom_profile_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("custom profile JSON: ") + e.what());
    }
    ProfileSpec spec;
    if (!j.contains("n") || !j.contains("domain") || !j.contains("alpha") ||
        !j.contains("phi_hat") || !j.contains("h"))
        throw ValidationError("custom profile JSON: need keys n, domain, alpha, phi_hat, h");
    spec.n = j.at("n").get<int>();
    const auto& dom = j.at("domain");
    if (!dom.is_array() || dom.size() != 2)
        throw ValidationError("custom profile JSON: domain must be [lo, hi]");
    spec.domain_lo = dom[0].get<double>();
    spec.domain_hi = dom[1].is_string() ? kInf : dom[1].get<double>();
    spec.alpha = parse_field(j.at("alpha"), "alpha");
    spec.phi_hat = parse_field(j.at("phi_hat"), "phi_hat");
    spec.h = parse_field(j.at("h"), "h");
    return custom_profile(spec);
}

SubmersionProfile load_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open profile file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return custom_profile_from_json(ss.str());
}

}  // namespace solitons
