#include "chunknet/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace chunknet {

namespace {

double logb(double x, double base) { return std::log2(x) / std::log2(base); }

void check_query(double k, double l, double q, double eps) {
    if (k < 1 || l < 1 || q < 1)
        throw std::invalid_argument("bound query: k, l, q must be >= 1");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("bound query: eps must be in (0,1)");
}

double sum_terms(BoundResult& r) {
    double s = 0.0;
    for (const BoundTerm& t : r.terms) s += t.value;
    r.n_min = s;
    return s;
}

} // namespace

BoundResult dense_bound(double k, double l, double eps, double log_base) {
    check_query(k, l, 1, eps);
    BoundResult r;
    r.label = "dense";
    r.terms = {{"k", k},
               {"l*log(kl/eps)", l * logb(k * l / eps, log_base)},
               {"log(1/eps)", logb(1.0 / eps, log_base)},
               {"l", l},
               {"1", 1.0}};
    sum_terms(r);
    return r;
}

BoundResult cc_bound(double k, double l, double q, double eps, double log_base) {
    check_query(k, l, q, eps);
    BoundResult r;
    r.label = "cc";
    r.terms = {{"k", k},
               {"q*l*log(kl/eps)", q * l * logb(k * l / eps, log_base)},
               {"q*log(1/eps)", q * logb(1.0 / eps, log_base)},
               {"q*log(q)", q * logb(q, log_base)},
               {"q", q}};
    sum_terms(r);
    r.conditions = {{"l^4*q^2*log(kl/eps)/k",
                     l * l * l * l * q * q * logb(k * l / eps, log_base) / k}};
    return r;
}

BoundResult occ_bound(double k, double l, double q, double eps, double log_base) {
    check_query(k, l, q, eps);
    BoundResult r;
    r.label = "occ";
    r.terms = {{"k", k},
               {"q*l*log(kl/eps)", q * l * logb(k * l / eps, log_base)},
               {"q*l", q * l},
               {"log(1/eps)", logb(1.0 / eps, log_base)},
               {"1", 1.0}};
    sum_terms(r);
    r.conditions = {{"l^4*q^2*log(kl/eps)/k",
                     l * l * l * l * q * q * logb(k * l / eps, log_base) / k}};
    r.note = "requires overlap gamma >= sqrt(k)";
    return r;
}

BoundResult occ_small_overlap_bound(double k, double l, double q, double eps,
                                    double log_base) {
    check_query(k, l, q, eps);
    const double kappa =
        q * logb(1.0 / eps, log_base) + q * logb(q, log_base) + q;
    BoundResult r;
    r.label = "occ-small-overlap";
    r.terms = {{"k", k},
               {"q*l*log(kl/eps)", q * l * logb(k * l / eps, log_base)},
               {"kappa", kappa}};
    sum_terms(r);
    r.conditions = {{"l^4*q^2*log(kl/eps)/k",
                     l * l * l * l * q * q * logb(k * l / eps, log_base) / k}};
    r.note = "kappa reported at its upper bound q*log(1/eps)+q*log(q)+q; "
             "tight for tau=1, looser as tau grows";
    return r;
}

BoundResult erasure_bound(ErasureKind kind, double k, double q, double eps,
                          double log_base) {
    check_query(k, 1, q, eps);
    BoundResult r;
    if (kind == ErasureKind::Dense) {
        r.label = "erasure-dense";
        r.terms = {{"k", k}, {"log(1/eps)", logb(1.0 / eps, log_base)}};
    } else {
        r.label = "erasure-chunked";
        r.terms = {{"k", k},
                   {"q*log(1/eps)", q * logb(1.0 / eps, log_base)},
                   {"q*log(q)", q * logb(q, log_base)}};
    }
    sum_terms(r);
    return r;
}

double lemma3_flow_bound(double n, double l, double q, double eps, double big_o_constant,
                         double log_base) {
    check_query(n, l, q, eps);
    const double loss = big_o_constant *
        std::pow(l * l * l * l * q * q / n * logb(l * n / eps, log_base), 0.25);
    return (1.0 - loss) * (n / q);
}

double per_chunk_density_threshold(double n, double l, double q, double eps,
                                   double log_base) {
    check_query(n, l, q, eps);
    return n / q -
           l * (logb(n / q, log_base) + logb(1.0 / eps, log_base) + logb(l, log_base) + 1.0);
}

std::vector<std::pair<std::string, double>> condition_diagnostics(
    double k, double n, double l, double q, double tau, double alpha, double eps,
    double log_base) {
    check_query(k, l, q, eps);
    if (n < 1 || tau < 1 || alpha < 1)
        throw std::invalid_argument("condition diagnostics: n, tau, alpha must be >= 1");
    const double l4 = l * l * l * l;
    return {
        {"(1) l^4*q^2*log(ln/eps)/n", l4 * q * q * logb(l * n / eps, log_base) / n},
        {"(2) q^2*log(n/eps)/n", q * q * logb(n / eps, log_base) / n},
        {"(3) l^4*q^2*log(kl/eps)/k", l4 * q * q * logb(k * l / eps, log_base) / k},
        {"(4) tau*l^4*q*log(kl/eps)/alpha",
         tau * l4 * q * logb(k * l / eps, log_base) / alpha},
    };
}

double conjecture_rank_failure_prob(double k, double n, std::optional<double> eps) {
    if (n < k) return 1.0;
    double p = std::exp2(-(n - k));
    if (eps) {
        if (!(*eps > 0.0 && *eps < 1.0))
            throw std::invalid_argument("conjecture_rank_failure_prob: eps must be in (0,1)");
        p *= *eps;
    }
    return p > 1.0 ? 1.0 : p;
}

} // namespace chunknet
