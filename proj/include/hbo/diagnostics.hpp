#pragma once
// Conserved functionals, polynomial moments, and per-snapshot records.
#include "hbo/grid.hpp"

#include <map>
#include <string>
#include <vector>

namespace hbo {

struct Conserved {
    double I = 0.0;  // integral of u
    double M = 0.0;  // integral of u^2
    double H = 0.0;  // quadratic dispersion term minus cubic term
};

// I, M by rectangle rule; the |D|^(1/2) term of H by Parseval.
Conserved conserved(const RealField& u);

// int x^beta u dx, rectangle rule, |beta| <= 3. x^beta u is not periodic,
// so callers rely on the boundary decay guard rather than on an error here.
double moment(const RealField& u, const MultiIndex& beta);

// max |u| over the seam planes of the box (any coordinate index 0 or n-1).
double boundary_max(const RealField& u);

// Moment multi-indices recorded per snapshot: 1 <= |beta| <= 3, graded order.
std::vector<MultiIndex> moment_index_list(int d);

struct DiagnosticsRecord {
    double t = 0.0;
    double I = 0.0, M = 0.0, H = 0.0;
    std::map<MultiIndex, double> moments;     // keys from moment_index_list
    std::map<double, double> weighted_norms;  // r -> ||<x>^r u||_2
    double boundary_max = 0.0;
    bool guard_warning = false;  // boundary value exceeds 1e-8 * max|u|
};

DiagnosticsRecord diagnose(const RealField& u, double t,
                           const std::vector<double>& weight_exponents);

// CSV serialization; one row per snapshot, %.17g throughout.
std::string moment_code(const MultiIndex& beta, int d);
std::string diagnostics_csv_header(const DiagnosticsRecord& sample, int d);
std::string diagnostics_csv_row(const DiagnosticsRecord& rec, int d);

}  // namespace hbo
