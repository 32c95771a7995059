#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "solitons/util.hpp"

namespace solitons {

enum class ProfileFamily { rotation, translation, dilation, custom };

const char* to_string(ProfileFamily f);
ProfileFamily profile_family_from_string(const std::string& name);

using ScalarFn = std::function<double(double)>;

// Submersion data for the reduced soliton equation: base metric coefficient
// alpha, reduced warping function phi_hat, and the constant mean curvature h
// of the fibre over s (taken with respect to -grad(pi)/|grad(pi)|), for an
// n-dimensional soliton in an (n+1)-dimensional ambient. The domain is an
// open interval; evaluation at or beyond an endpoint throws rather than
// clamping, since every built-in family degenerates there.
class SubmersionProfile {
public:
    SubmersionProfile(int n, double domain_lo, double domain_hi, ScalarFn alpha,
                      ScalarFn alpha_prime, ScalarFn phi_hat, ScalarFn phi_hat_prime, ScalarFn h,
                      ProfileFamily label);

    int n() const { return n_; }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }
    ProfileFamily label() const { return label_; }

    bool contains(double s) const { return s > lo_ && s < hi_; }
    void require_interior(double s) const;

    double alpha(double s) const { return checked(s, alpha_); }
    double alpha_prime(double s) const { return checked(s, alpha_prime_); }
    double phi_hat(double s) const { return checked(s, phi_hat_); }
    double phi_hat_prime(double s) const { return checked(s, phi_hat_prime_); }
    double h(double s) const { return checked(s, h_); }

    // Window used for samplewise validation; finite even when the domain is
    // half-infinite.
    std::pair<double, double> validation_window() const;

private:
    double checked(double s, const ScalarFn& f) const {
        require_interior(s);
        return f(s);
    }
    void validate() const;

    int n_;
    double lo_, hi_;
    ScalarFn alpha_, alpha_prime_, phi_hat_, phi_hat_prime_, h_;
    ProfileFamily label_;
};

// Rotational family: alpha = 1/(1+s^2), phi_hat = s^2, h = (n-1) s/sqrt(1+s^2)
// on (0, +inf).
SubmersionProfile rotator_profile(int n);

// Translational family: alpha = phi_hat = 1/s^2, h = -(n-1) on (0, +inf).
SubmersionProfile translator_profile(int n);

// Dilational family: alpha = 1/(1-s^2), phi_hat = 1/s^2,
// h = -2(n-1) s/sqrt(1-s^2) on (0, 1).
SubmersionProfile dilation_profile(int n);

SubmersionProfile profile_for(ProfileFamily family, int n);

// One coordinate function of a custom profile: a closed-form expression or a
// table of (s, value) samples interpolated monotone-cubically.
struct ProfileField {
    std::optional<std::string> expression;
    std::vector<std::pair<double, double>> samples;
    std::optional<std::string> derivative_expression;  // optional analytic derivative
};

struct ProfileSpec {
    int n = 2;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    ProfileField alpha, phi_hat, h;
};

SubmersionProfile custom_profile(const ProfileSpec& spec);

// JSON document: {"n": int, "domain": [lo, hi], "alpha": expr|samples,
// "phi_hat": expr|samples, "h": expr|samples}; each field may instead be
// {"expr": "...", "derivative": "..."} to supply an analytic derivative.
SubmersionProfile custom_profile_from_json(const std::string& json_text);
SubmersionProfile load_profile_file(const std::string& path);

}  // namespace solitons
