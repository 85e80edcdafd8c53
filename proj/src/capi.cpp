#include "sentinet/sentinet.h"

#include <cstring>
#include <filesystem>
#include <string>

#include "io.hpp"
#include "scenario.hpp"

// Thin exception-to-error-code shim over the C++ core.  Handles own their
// underlying objects; reports are returned as malloc-style heap strings.

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const sn::ParseError& e) {
        g_last_error = e.what();
        return SN_PARSE_ERROR;
    } catch (const sn::InsufficientComponentSize& e) {
        g_last_error = e.what();
        return SN_INFEASIBLE;
    } catch (const sn::InfeasibleConnectivity& e) {
        g_last_error = e.what();
        return SN_INFEASIBLE;
    } catch (const sn::EmptyNetwork& e) {
        g_last_error = e.what();
        return SN_INFEASIBLE;
    } catch (const sn::NotObservable& e) {
        g_last_error = e.what();
        return SN_SYNTHESIS_FAILED;
    } catch (const sn::SynthesisFailed& e) {
        g_last_error = e.what();
        return SN_SYNTHESIS_FAILED;
    } catch (const sn::DomainError& e) {
        g_last_error = e.what();
        return SN_INVALID_ARGUMENT;
    } catch (const sn::DimensionMismatch& e) {
        g_last_error = e.what();
        return SN_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SN_ERROR;
    }
}

} // namespace

struct sn_structure {
    sn::SystemStructure impl;
};

struct sn_design {
    sn::Design impl;
    int q = 0;
    double epsilon = 0.14;
};

struct sn_scenario {
    sn::Scenario impl;
};

extern "C" {

const char* sn_last_error(void) { return g_last_error.c_str(); }

void sn_string_free(char* s) { delete[] s; }

int sn_structure_builtin(const char* name, sn_structure** out) {
    if (!name || !out) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        if (std::string(name) != "fig2") {
            g_last_error = std::string("unknown builtin structure '") + name + "'";
            return static_cast<int>(SN_INVALID_ARGUMENT);
        }
        *out = new sn_structure{sn::fig2_structure()};
        return static_cast<int>(SN_OK);
    });
}

int sn_structure_load(const char* path, sn_structure** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = new sn_structure{sn::load_edge_list(path)};
        return static_cast<int>(SN_OK);
    });
}

void sn_structure_free(sn_structure* s) { delete s; }

int sn_analyze(const sn_structure* s, char** report) {
    if (!s || !report) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *report = dup_string(sn::analyze_report(s->impl));
        return static_cast<int>(SN_OK);
    });
}

int sn_design_run(const sn_structure* s, int q, unsigned long long seed,
                  double epsilon, sn_design** out) {
    if (!s || !out) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        sn::Scenario scn;
        scn.structure_source = "";  // resolved below via explicit structure
        scn.q = q;
        scn.network_mode = "synth";
        scn.network_seed = seed;
        if (epsilon > 0.0) scn.gain.epsilon = epsilon;

        // Reuse the scenario pipeline with the given structure in place of a
        // named source.
        sn::Design d;
        d.placement = sn::place_outputs_q_redundant(s->impl, q);
        d.structure = sn::with_outputs(s->impl, d.placement.placed());
        d.sys = sn::instantiate_lsi(d.structure, scn.lsi_seed, scn.value_lo,
                                    scn.value_hi, /*fixed_weights=*/true,
                                    /*unit_outputs=*/true);
        const int n = d.sys.n(), N = d.sys.N();
        d.sys.sigma_nu = scn.sigma_nu * Eigen::MatrixXd::Identity(n, n);
        d.sys.sigma_zeta = scn.sigma_zeta * Eigen::VectorXd::Ones(N);
        d.net = sn::build_beta_network(N, q, seed);
        sn::build_alpha_network(d.placement, d.net);
        d.gain = sn::synthesize_gain(d.sys.A, d.net.W, d.net.U, d.sys.C, scn.gain);
        d.bound = sn::error_bound(d.gain.assembled, d.sys.A, d.net.W, d.net.U,
                                  d.sys.C, d.sys.sigma_nu, d.sys.sigma_zeta);
        d.stats = sn::residual_stats(d.sys, d.net, d.bound);
        *out = new sn_design{std::move(d), q, scn.gain.epsilon};
        return static_cast<int>(SN_OK);
    });
}

void sn_design_free(sn_design* d) { delete d; }

int sn_design_report(const sn_design* d, char** report) {
    if (!d || !report) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *report = dup_string(sn::design_report(d->impl, d->q));
        return static_cast<int>(SN_OK);
    });
}

int sn_design_sensor_count(const sn_design* d) {
    return d ? static_cast<int>(d->impl.placement.placed().size()) : -1;
}

double sn_design_rho(const sn_design* d) {
    return d ? d->impl.gain.achieved_radius : -1.0;
}

int sn_design_write(const sn_design* d, const char* out_dir) {
    if (!d || !out_dir) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const std::string dir(out_dir);
        std::filesystem::create_directories(dir);
        sn::write_file(dir + "/placement.txt",
                       sn::format_index_list(d->impl.placement.placed()));
        sn::write_file(dir + "/W.txt", sn::format_matrix(d->impl.net.W));
        sn::write_file(dir + "/U.txt", sn::format_int_matrix(d->impl.net.U));
        std::vector<int> alpha1;  // exported 1-indexed like placements
        for (int a : d->impl.net.alpha_set) alpha1.push_back(a + 1);
        sn::write_file(dir + "/alpha.txt", sn::format_index_list(alpha1));
        sn::write_file(dir + "/gain.txt",
                       sn::format_gain(d->impl.gain, d->impl.sys.n(), d->epsilon));
        return static_cast<int>(SN_OK);
    });
}

int sn_scenario_builtin(const char* name, sn_scenario** out) {
    if (!name || !out) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        if (std::string(name) != "section5") {
            g_last_error = std::string("unknown builtin scenario '") + name + "'";
            return static_cast<int>(SN_INVALID_ARGUMENT);
        }
        *out = new sn_scenario{sn::section5_scenario()};
        return static_cast<int>(SN_OK);
    });
}

int sn_scenario_load(const char* path, sn_scenario** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = new sn_scenario{sn::load_scenario(path)};
        return static_cast<int>(SN_OK);
    });
}

void sn_scenario_free(sn_scenario* s) { delete s; }

int sn_simulate(const sn_scenario* s, const char* out_dir) {
    if (!s || !out_dir) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        sn::write_bundle(sn::run_scenario(s->impl), out_dir);
        return static_cast<int>(SN_OK);
    });
}

int sn_sweep(double normalized_sq_residual, int t_min, int t_max,
             const double* mus, size_t n_mus, char** csv) {
    if (!mus || !csv || n_mus == 0) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *csv = dup_string(sn::sweep_csv(normalized_sq_residual, t_min, t_max,
                                        std::vector<double>(mus, mus + n_mus)));
        return static_cast<int>(SN_OK);
    });
}

int sn_verify(const char* bundle_dir, int* ok, char** report) {
    if (!bundle_dir || !ok || !report) {
        g_last_error = "null argument";
        return SN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        bool good = false;
        *report = dup_string(sn::verify_bundle(bundle_dir, good));
        *ok = good ? 1 : 0;
        return static_cast<int>(SN_OK);
    });
}

} // extern "C"
