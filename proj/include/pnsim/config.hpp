#pragma once

#include "pnsim/engine.hpp"
#include "pnsim/errors.hpp"
#include "pnsim/pn_model.hpp"
#include "pnsim/psd.hpp"
#include "pnsim/ptrs.hpp"
#include "pnsim/waveform.hpp"

#include "json.hpp"

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace pnsim {

/// Full description of one simulation run. Defaults mirror the large-carrier
/// link setup this project targets: 2048-point transform, 1024 active
/// subcarriers, Fs = 1966.08 MHz, 16-QAM.
struct RunConfig {
    FrameConfig frame;

    struct Pn {
        bool enabled = true;
        std::string tx_psd_path;
        std::string rx_psd_path; // defaults to tx_psd_path when empty
        double carrier_hz = 140e9;
        // test model alternative
        bool wiener = false;
        double wiener_sigma_step = 0.0;
    } pn;

    struct PatternSpec {
        std::string type = "distributed"; // "distributed" | "contiguous"
        Eigen::Index l = 64;
        Eigen::Index ng = 2;
        Eigen::Index ns = 2;
    };
    std::vector<PatternSpec> patterns;

    struct EstimatorEntry {
        EstimatorSpec spec;
    };
    std::vector<EstimatorEntry> estimators;

    std::vector<double> snr_grid_db;

    std::uint64_t seed = 1;
    Eigen::Index max_frames = 200;
    long long min_bit_errors = 100;
    Eigen::Index train_frames = 2000;
    std::string cov_cache; // covariance cache path for train/run
    std::string out_dir = ".";

    // oracle-check knobs
    Eigen::Index oracle_seeds = 10;

    nlohmann::json raw; // config echo for the run manifest
};

inline PtrsPattern build_pattern(const RunConfig::PatternSpec& ps, Eigen::Index n_active) {
    if (ps.type == "distributed")
        return distributed_pattern(n_active, ps.l);
    if (ps.type == "contiguous")
        return contiguous_pattern(n_active, ps.ng, ps.ns);
    throw ConfigError("pattern type must be \"distributed\" or \"contiguous\", got " + ps.type);
}

inline PnModel build_pn_model(const RunConfig& rc) {
    PnModel model;
    if (!rc.pn.enabled) {
        model.kind = PnModel::Kind::off;
        model.id = "off";
        return model;
    }
    if (rc.pn.wiener) {
        model.kind = PnModel::Kind::wiener;
        model.wiener_sigma_step = rc.pn.wiener_sigma_step;
        model.id = "wiener";
        return model;
    }
    if (rc.pn.tx_psd_path.empty())
        throw ConfigError("pn.tx_psd must name a PSD spec file when phase noise is enabled");
    model.kind = PnModel::Kind::psd;
    model.tx = carrier_scale(load_psd_file(rc.pn.tx_psd_path), rc.pn.carrier_hz);
    model.rx = rc.pn.rx_psd_path.empty()
                   ? model.tx
                   : carrier_scale(load_psd_file(rc.pn.rx_psd_path), rc.pn.carrier_hz);
    model.id = model.tx.id + "+" + model.rx.id + "@" + std::to_string(rc.pn.carrier_hz);
    return model;
}

/// Validate every cross-field constraint before any simulation work starts.
inline void validate_run_config(const RunConfig& rc) {
    rc.frame.validate();
    if (rc.patterns.empty())
        throw ConfigError("config: at least one PTRS pattern is required");
    if (rc.estimators.empty())
        throw ConfigError("config: at least one estimator is required");
    if (rc.snr_grid_db.empty())
        throw ConfigError("config: SNR grid must be non-empty");
    if (rc.max_frames < 1)
        throw ConfigError("config: max_frames must be positive");
    for (const auto& ps : rc.patterns) {
        const PtrsPattern pattern = build_pattern(ps, rc.frame.n_active); // throws ConfigError
        for (const auto& est : rc.estimators) {
            if (est.spec.kind == EstimatorSpec::Kind::dct && est.spec.n_d > pattern.k())
                throw ConfigError("config: dct n_d (" + std::to_string(est.spec.n_d) +
                                  ") exceeds pilot count K (" + std::to_string(pattern.k()) +
                                  ") for pattern " + pattern.describe() +
                                  "; the DCT fit requires n_d <= K");
        }
    }
    if (build_pn_model(rc).kind == PnModel::Kind::psd) {
        // PSD files already validated on load; nothing further here.
    }
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig rc;
    rc.raw = j;
    try {
        if (j.contains("frame")) {
            const auto& f = j.at("frame");
            rc.frame.n_fft = f.value("n_fft", rc.frame.n_fft);
            rc.frame.n_active = f.value("n_active", rc.frame.n_active);
            rc.frame.cp_len = f.value("cp_len", rc.frame.cp_len);
            rc.frame.n_symbols = f.value("n_symbols", rc.frame.n_symbols);
            rc.frame.mod_order = f.value("mod_order", rc.frame.mod_order);
            rc.frame.fs_hz = f.value("fs_hz", rc.frame.fs_hz);
            rc.frame.map_offset = f.value("map_offset", rc.frame.map_offset);
        }
        if (j.contains("pn")) {
            const auto& p = j.at("pn");
            rc.pn.enabled = p.value("enabled", true);
            rc.pn.tx_psd_path = p.value("tx_psd", std::string());
            rc.pn.rx_psd_path = p.value("rx_psd", std::string());
            rc.pn.carrier_hz = p.value("carrier_hz", rc.pn.carrier_hz);
            rc.pn.wiener = p.contains("wiener_sigma_step");
            rc.pn.wiener_sigma_step = p.value("wiener_sigma_step", 0.0);
        }
        for (const auto& pj : j.value("patterns", nlohmann::json::array())) {
            RunConfig::PatternSpec ps;
            ps.type = pj.at("type").get<std::string>();
            ps.l = pj.value("l", Eigen::Index{0});
            ps.ng = pj.value("ng", Eigen::Index{0});
            ps.ns = pj.value("ns", Eigen::Index{0});
            rc.patterns.push_back(ps);
        }
        for (const auto& ej : j.value("estimators", nlohmann::json::array())) {
            RunConfig::EstimatorEntry entry;
            entry.spec = EstimatorSpec::parse(ej.at("name").get<std::string>());
            if (entry.spec.kind == EstimatorSpec::Kind::dct) {
                entry.spec.n_d = ej.value("n_d", Eigen::Index{2});
                const std::string ref = ej.value("phi_av", std::string("derotated"));
                if (ref == "derotated")
                    entry.spec.dct_reference = DctReference::derotated;
                else if (ref == "raw_pilot_sum")
                    entry.spec.dct_reference = DctReference::raw_pilot_sum;
                else
                    throw ConfigError("dct phi_av must be \"derotated\" or \"raw_pilot_sum\"");
            }
            if (entry.spec.kind == EstimatorSpec::Kind::interp_filter)
                entry.spec.cov_cache = ej.value("cov_cache", std::string());
            rc.estimators.push_back(std::move(entry));
        }
        rc.snr_grid_db = j.value("snr_db", std::vector<double>{});
        rc.seed = j.value("seed", std::uint64_t{1});
        rc.max_frames = j.value("max_frames", Eigen::Index{200});
        rc.min_bit_errors = j.value("min_bit_errors", 100LL);
        rc.train_frames = j.value("train_frames", Eigen::Index{2000});
        rc.cov_cache = j.value("cov_cache", std::string());
        rc.out_dir = j.value("out_dir", std::string("."));
        rc.oracle_seeds = j.value("oracle_seeds", Eigen::Index{10});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed run config: ") + e.what());
    }
    return rc;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

} // namespace pnsim
