#pragma once

// Reference values produced by tests/oracles/compute_oracles.py (mpmath / scipy),
// computed independently of the library and frozen here.

namespace oracle {

// int_0^0.01 exp(-1/y) dy, 50-digit adaptive quadrature.
inline constexpr double flat_integral = 3.64782143418831519579407152466e-48;
// x^2 e^{-1/x} (1 - 2x + 6x^2 - 24x^3) at x = 0.01.
inline constexpr double flat_integral_asymptotic = 3.64781722026260724521516667257e-48;

// Ground state of -d^2/dy^2 + exp(-|y|^-1) zeta^2 on [-1, 1], zeta = e^6, 8193 nodes.
inline constexpr double ground_alpha1_zeta_e6_n8193 = 71.91952212545448;

// Ground states at zeta = e^10 for exp(-|y|^-alpha), alpha = 0.5, 1, 2.
inline constexpr double ground_zeta_e10_n32769[3] = {13467.930827310955, 297.73958436545956, 29.41579873039064};
inline constexpr double ground_zeta_e10_n8193[3] = {13466.700384206533, 297.7384823926644, 29.41577989431113};

// Sign of d log S / d log delta along decisive intervals [0, h] for exp(-|y|^-alpha):
// rows alpha = 0.25, 0.5, 0.8, 1.25, 2, 4; columns p = 0.5, 1, 2.
inline constexpr double mp_alphas[6] = {0.25, 0.5, 0.8, 1.25, 2.0, 4.0};
inline constexpr double mp_ps[3] = {0.5, 1.0, 2.0};
inline constexpr int mp_slope_sign[6][3] = {{1, 1, 1}, {1, 1, -1}, {1, 1, -1}, {1, -1, -1}, {-1, -1, -1}, {-1, -1, -1}};

}  // namespace oracle
