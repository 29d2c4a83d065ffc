#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exchboot/weights.hpp"

namespace exchboot {

// A closed-form evaluation with its inputs echoed for auditing.
struct BoundReport {
  std::string tag;
  std::vector<std::pair<std::string, double>> inputs;
  double value = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  bool valid = true;
};

// Upper tail level for the conditional mean: E + sqrt(12 kappa x E) + 5 kappa x.
double self_bounding_upper(double E, double kappa, double x);
// Lower tail level E - sqrt(12 kappa x E), possibly negative.
double self_bounding_lower(double E, double kappa, double x);

// 9 min{(b - a) sqrt(v_plus), ||w||_2} sqrt(u).
double exchangeable_deviation(double u, double range, double v_plus, double w_l2);
// theta^2 min{19 (b - a)^2 v_plus, 4.2 ||w||^2}.
double exchangeable_mgf_exponent(double theta, double range, double v_plus, double w_l2);
BoundReport exchangeable_mgf_report(double theta, double range, double v_plus, double w_l2,
                                    std::size_t n);

// (2 gbar + v_plus) (e^lambda - lambda - 1).
double efron_mgf_exponent(double lambda, double gbar, double v_plus);

enum class TailVariant { classic, exchangeable_pair };
double tolstikhin_tail(double t, std::size_t n, double sigma2, TailVariant variant);

// theta^2 (1 - alpha0) n / (n - 1) r V_plus.
double conc_fun_permut_exponent(double theta, double alpha0, std::size_t n, double r, double V_plus);
// 9.5 theta^2 V_plus; valid only for alpha0 = 1/2 and n >= 34.
double explicit_exponent(double theta, double V_plus);
BoundReport explicit_exponent_report(double theta, double V_plus, std::size_t n);

double r_bound(std::size_t n);

double general_deviation(double x, double M_n_xi, double kappa_xi, double xi_inf, double M_n,
                         double sigma2);

double alpha_B(double alpha, double delta, std::size_t B);
BoundReport alpha_B_report(double alpha, double delta, std::size_t B);

double ks_power_threshold(std::size_t n, std::size_t m, double alpha_b, double delta);
double mmd_power_threshold(std::size_t n, std::size_t m, double alpha_b, double delta, double kappa);

struct SeparationInputs {
  std::size_t n = 0;
  std::size_t m = 0;
  double Mn_P = 0.0;  // expected sup of the centered process for n draws from P
  double Mn_Q = 0.0;
  double Mm_P = 0.0;
  double Mm_Q = 0.0;
  double delta = 0.05;
  double alpha_b = 0.05;
  double d = 0.0;  // distance between P and Q over the class
  // Variance terms, used by the Bernstein-type condition only.
  double sigma2_P = 0.0;
  double sigma2_Q = 0.0;
  double V = 0.0;
};
// Left-hand factor and right-hand side of the two separation conditions.
double separation_hoeffding_rhs(const SeparationInputs& in);
double separation_bernstein_rhs(const SeparationInputs& in);
double separation_hoeffding_factor(const SeparationInputs& in);
double separation_bernstein_factor(const SeparationInputs& in);
bool separation_hoeffding_holds(const SeparationInputs& in);
bool separation_bernstein_holds(const SeparationInputs& in);

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};
// Bracket for E g(X, xi) in terms of M_n.
Bracket expectation_sandwich(double M_n, const SchemeStats& stats, bool symmetric);

double dkw_mean_bound(std::size_t k);

double quantile_boot_bound(double gamma, double alpha1, double alpha2, double alpha3,
                           double q_Mn_xi, double q_xi_inf, double M_n, double sigma2);

struct ConfRegionBounds {
  double upper = 0.0;
  double lower = 0.0;
  double theta_up = 0.0;
  double theta_lo = 0.0;
};
ConfRegionBounds conf_region_bounds(double R_hat, const SchemeStats& stats, double sigma_B,
                                    double M, std::size_t n, double x, bool symmetric);

double lp_sigma_upper(std::span<const double> per_coordinate_sd, double p);

// Named-parameter entry point used by the command line.
std::vector<std::string> bound_tags();
BoundReport evaluate_bound(const std::string& tag, const std::map<std::string, double>& params);

}  // namespace exchboot
