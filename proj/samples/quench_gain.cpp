// Quantum gain g(t) after a small coupling quench, biased near and away from the
// critical point.

#include "qcd/qcd.hpp"

#include <cstdio>

int main() {
    const qcd::BasisSpec basis = qcd::make_basis(20, 20);
    qcd::QuenchSetup setup;
    setup.params = qcd::ModelParams{1.0, 0.0, 1.0};
    setup.delta_lambda = 0.01;
    setup.evolution.t_final = 40.0;

    for (double lambda0 : {0.60, 0.675}) {
        const qcd::TimeSeries ts = qcd::run_quench(basis, setup, lambda0);
        const qcd::GainPeak peak = qcd::peak_of(ts);
        std::printf("lambda0 = %.3f: g(40) = %.4f, peak g = %.4f at t = %.1f, SQNR there = %.4f\n", lambda0,
                    qcd::gain_at(ts, 40.0), peak.g_max, peak.t_at_max, peak.sqnr_at_max);
    }
}
