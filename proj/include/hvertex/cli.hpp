#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hvertex/enveloping.hpp"
#include "hvertex/venv.hpp"

namespace hvertex {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kParse = 1;
inline constexpr int kValidation = 2;
inline constexpr int kVerifyFailed = 3;
inline constexpr int kUsage = 4;
}  // namespace exit_code

// Element expressions. In V `*` is the normally ordered product (right
// nested), `.` joins generator factors into one PBW monomial; in S(R) every
// product is commutative. `Th` is T_hbar, `T` the translation T_hbar - hbar H,
// `h` is hbar and `vac` the vacuum (1 in S(R)).
VElement parse_v_element(const VertexAlgebra& v, std::string_view text);
SElement parse_s_element(const VertexAlgebra& v, std::string_view text);

// {"expr": ..., "terms": [[tokens, coefficient], ...]}
std::string v_json(const VertexAlgebra& v, const VPoly& p);
std::string s_json(const LCAlgebra& alg, const SElementPoly& p);

// Full command line: hvertex <algebra> <command> [args...] [flags].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hvertex
