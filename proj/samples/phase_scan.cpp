// Order parameters across the first-order transition at J = 1, next to the
// mean-field prediction.

#include "qcd/qcd.hpp"

#include <cstdio>

int main() {
    const qcd::BasisSpec basis = qcd::make_basis(20, 20);
    const qcd::ModelParams base{1.0, 0.0, 1.0};

    std::printf("%8s %10s %10s %10s %6s\n", "lambda", "zeta_S", "zeta_My", "mf_zeta_S", "phase");
    for (double lambda : qcd::linspace(0.5, 0.9, 9)) {
        const qcd::ModelParams p = base.with_lambda(lambda);
        const qcd::PointResult r = qcd::solve_point(basis, p);
        const qcd::MeanFieldSolution mf = qcd::minimize(p);
        std::printf("%8.3f %10.5f %10.5f %10.5f %6s\n", lambda, r.obs.zeta_S, r.obs.zeta_My, mf.zeta_S(),
                    qcd::phase_name(mf.phase).c_str());
    }
}
