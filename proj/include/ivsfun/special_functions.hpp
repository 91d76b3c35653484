#pragma once

// Upper incomplete gamma Gamma(s, y) for s in (-1, 0], y > 0 — the only
// special function the Levy discretization needs (tempered-stable masses).

namespace ivsfun {

// Gamma(s, y) = int_y^inf t^{s-1} e^{-t} dt.
// Continued fraction for y >= 1, recurrence + lower series for y < 1.
double upper_incomplete_gamma(double s, double y);

// gamma(s, y) = int_0^y t^{s-1} e^{-t} dt, s > 0, via the standard series.
double lower_incomplete_gamma(double s, double y);

// E1(y) = Gamma(0, y).
double exponential_integral_e1(double y);

} // namespace ivsfun
