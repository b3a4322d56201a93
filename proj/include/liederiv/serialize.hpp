#pragma once

#include <string>
#include <string_view>

#include "liederiv/flows.hpp"

namespace liederiv {

// Records for descriptors, e.g.
//   affine{A = [[1, 0], [0, 1]]; b = [0, 0]}
//   aut_s{phi = affine{...}; K = 2; Omega = (x1) * dx1}
// Every parser checks the ambient dimension and reads scalars in `mode`.

std::string to_string(const Matrix& m);
std::string to_string(const AffineMap& phi);
std::string to_string(const FlowField& Y);
std::string to_string(const D1Derivation& c);
std::string to_string(const SDerivation& c);
std::string to_string(const DDerivation& c);
std::string to_string(const AutD1& a);
std::string to_string(const AutS& a);
std::string to_string(const AutD& a);

Matrix parse_matrix_value(std::string_view text, int dim, Mode mode);
AffineMap parse_affine(std::string_view text, int dim, Mode mode);
FlowField parse_flow_field(std::string_view text, int dim, Mode mode);
D1Derivation parse_d1_derivation(std::string_view text, int dim, Mode mode);
SDerivation parse_s_derivation(std::string_view text, int dim, Mode mode);
DDerivation parse_d_derivation(std::string_view text, int dim, Mode mode);
AutD1 parse_aut_d1(std::string_view text, int dim, Mode mode);
AutS parse_aut_s(std::string_view text, int dim, Mode mode);
AutD parse_aut_d(std::string_view text, int dim, Mode mode);

}  // namespace liederiv
