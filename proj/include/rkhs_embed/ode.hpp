#pragma once

#include <Eigen/Dense>

namespace rkhs_embed {

/// Scratch vectors for one classical RK4 step; reuse across steps.
struct Rk4Workspace {
    Eigen::VectorXd k1, k2, k3, k4, stage;

    void resize(Eigen::Index n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        stage.resize(n);
    }
};

/// One classical fourth-order Runge-Kutta step of size h, in place.
/// `rhs(t, y, dydt)` writes the derivative into its third argument.
template <class Rhs>
void rk4_step(Rhs&& rhs, double t, Eigen::VectorXd& y, double h, Rk4Workspace& ws) {
    if (ws.k1.size() != y.size()) ws.resize(y.size());
    rhs(t, y, ws.k1);
    ws.stage = y + 0.5 * h * ws.k1;
    rhs(t + 0.5 * h, ws.stage, ws.k2);
    ws.stage = y + 0.5 * h * ws.k2;
    rhs(t + 0.5 * h, ws.stage, ws.k3);
    ws.stage = y + h * ws.k3;
    rhs(t + h, ws.stage, ws.k4);
    y += (h / 6.0) * (ws.k1 + 2.0 * (ws.k2 + ws.k3) + ws.k4);
}

}  // namespace rkhs_embed
