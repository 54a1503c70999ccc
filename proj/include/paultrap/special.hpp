#ifndef PAULTRAP_SPECIAL_HPP
#define PAULTRAP_SPECIAL_HPP

namespace paultrap {

// Physicists' Hermite polynomial H_n(x) by the three-term recurrence
// H_{k+1} = 2x H_k - 2k H_{k-1}.
double hermite(int n, double x);

// Generalized Laguerre polynomial L_k^(alpha)(x), integer alpha >= 0, by
// (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}.
double glaguerre(int k, int alpha, double x);

// ln(n!) from a cumulative-sum table (exact to ~1e-15 relative for n <= 170),
// lgamma beyond the table.
double log_factorial(int n);

}  // namespace paultrap

#endif
