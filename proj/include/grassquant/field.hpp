// Copyright 2026 The grassquant Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRASSQUANT_FIELD_HPP_
#define GRASSQUANT_FIELD_HPP_

#include <complex>
#include <concepts>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "grassquant/errors.hpp"

namespace grassquant {

enum class Field { Real, Complex };

/// Real dimension multiplier: 1 over the reals, 2 over the complex numbers.
constexpr int beta(Field field) noexcept { return field == Field::Real ? 1 : 2; }

inline std::string_view to_string(Field field) noexcept {
  return field == Field::Real ? "real" : "complex";
}

inline Field parse_field(std::string_view text) {
  if (text == "real" || text == "R") return Field::Real;
  if (text == "complex" || text == "C") return Field::Complex;
  throw ParameterError("unknown field '" + std::string(text) + "' (expected real or complex)");
}

using Complex = std::complex<double>;

template <class S>
concept FieldScalar = std::same_as<S, double> || std::same_as<S, Complex>;

template <FieldScalar S>
inline constexpr Field field_of = std::same_as<S, double> ? Field::Real : Field::Complex;

template <FieldScalar S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Real part of the squared modulus, |x|^2.
inline double abs2(double x) noexcept { return x * x; }
inline double abs2(const Complex& x) noexcept { return std::norm(x); }

/// Calls fn with a value of the scalar type matching the runtime field tag.
template <class Fn>
decltype(auto) dispatch_field(Field field, Fn&& fn) {
  if (field == Field::Real) return fn(double{});
  return fn(Complex{});
}

}  // namespace grassquant

#endif  // GRASSQUANT_FIELD_HPP_
