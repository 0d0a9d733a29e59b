#pragma once

#include "pnsim/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace pnsim {

/// One corner of the pole/zero PSD model: a corner frequency and an exponent.
struct PsdCorner {
    double f_hz = 0.0;
    double exponent = 0.0;
};

/// Parametric oscillator phase-noise spectrum of the multi pole-zero family
///
///   S(f) = S0 * prod_n [1 + (f/fz_n)^az_n] / prod_m [1 + (f/fp_m)^ap_m]
///
/// with S0 = 10^(psd0_dbc_hz/10). psd0_dbc_hz is referenced to
/// f_carrier_ref_hz; carrier_scale() retargets the spec to another carrier
/// with the usual 20 log10 rule.
struct PsdSpec {
    std::string id;                  // short model identifier for cache keys
    double psd0_dbc_hz = -300.0;     // may be -inf to model a silent oscillator
    double f_carrier_ref_hz = 1.0;
    double f_carrier_hz = 1.0;
    std::vector<PsdCorner> zeros;
    std::vector<PsdCorner> poles;

    void validate() const {
        if (!(f_carrier_ref_hz > 0.0) || !(f_carrier_hz > 0.0))
            throw ConfigError("PsdSpec: carrier frequencies must be positive");
        for (const auto& c : zeros)
            if (!(c.f_hz > 0.0) || !(c.exponent > 0.0))
                throw ConfigError("PsdSpec: zero corner frequencies and exponents must be positive");
        for (const auto& c : poles)
            if (!(c.f_hz > 0.0) || !(c.exponent > 0.0))
                throw ConfigError("PsdSpec: pole corner frequencies and exponents must be positive");
    }
};

/// Evaluate the PSD at frequency offset f, in linear units (1/Hz).
inline double psd_eval_linear(const PsdSpec& spec, double f_hz) {
    if (!(f_hz > 0.0))
        throw std::domain_error("psd_eval: frequency offset must be > 0");
    double s = std::pow(10.0, spec.psd0_dbc_hz / 10.0);
    for (const auto& z : spec.zeros)
        s *= 1.0 + std::pow(f_hz / z.f_hz, z.exponent);
    for (const auto& p : spec.poles)
        s /= 1.0 + std::pow(f_hz / p.f_hz, p.exponent);
    return s;
}

/// Evaluate the PSD at frequency offset f, in dBc/Hz.
inline double psd_eval(const PsdSpec& spec, double f_hz) {
    return 10.0 * std::log10(psd_eval_linear(spec, f_hz));
}

/// Retarget the spec to a new carrier: psd0 shifts by 20 log10(f_new/f_ref).
inline PsdSpec carrier_scale(const PsdSpec& spec, double f_new_hz) {
    if (!(f_new_hz > 0.0))
        throw std::domain_error("carrier_scale: carrier frequency must be > 0");
    PsdSpec out = spec;
    out.psd0_dbc_hz += 20.0 * std::log10(f_new_hz / spec.f_carrier_ref_hz);
    out.f_carrier_hz = f_new_hz;
    return out;
}

inline PsdSpec psd_from_json(const nlohmann::json& j) {
    PsdSpec spec;
    spec.id = j.value("id", std::string("psd"));
    spec.psd0_dbc_hz = j.at("psd0_dbc_hz").get<double>();
    spec.f_carrier_ref_hz = j.at("f_carrier_ref_hz").get<double>();
    spec.f_carrier_hz = spec.f_carrier_ref_hz;
    for (const auto& z : j.value("zeros", nlohmann::json::array()))
        spec.zeros.push_back({z.at("f_hz").get<double>(), z.at("exp").get<double>()});
    for (const auto& p : j.value("poles", nlohmann::json::array()))
        spec.poles.push_back({p.at("f_hz").get<double>(), p.at("exp").get<double>()});
    spec.validate();
    return spec;
}

inline nlohmann::json psd_to_json(const PsdSpec& spec) {
    nlohmann::json j;
    j["id"] = spec.id;
    j["psd0_dbc_hz"] = spec.psd0_dbc_hz;
    j["f_carrier_ref_hz"] = spec.f_carrier_ref_hz;
    j["zeros"] = nlohmann::json::array();
    for (const auto& z : spec.zeros)
        j["zeros"].push_back({{"f_hz", z.f_hz}, {"exp", z.exponent}});
    j["poles"] = nlohmann::json::array();
    for (const auto& p : spec.poles)
        j["poles"].push_back({{"f_hz", p.f_hz}, {"exp", p.exponent}});
    return j;
}

inline PsdSpec load_psd_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open PSD spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        PsdSpec spec = psd_from_json(j);
        if (spec.id == "psd") {
            // derive an id from the file name stem
            auto slash = path.find_last_of("/\\");
            std::string stem = (slash == std::string::npos) ? path : path.substr(slash + 1);
            auto dot = stem.find_last_of('.');
            spec.id = (dot == std::string::npos) ? stem : stem.substr(0, dot);
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed PSD spec file " + path + ": " + e.what());
    }
}

} // namespace pnsim
