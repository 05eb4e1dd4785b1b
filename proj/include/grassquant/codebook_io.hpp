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

#ifndef GRASSQUANT_CODEBOOK_IO_HPP_
#define GRASSQUANT_CODEBOOK_IO_HPP_

// Binary codebook file (little endian):
//
//   offset  size  field
//   0       4     magic "GQCB"
//   4       4     uint32 format version (1)
//   8       4     uint32 n
//   12      4     uint32 p
//   16      1     uint8 field (0 real, 1 complex)
//   17      7     zero padding
//   24      8     uint64 K
//   32      ...   K bases, each n x p in row-major order as float64;
//                 complex entries are stored as (re, im) pairs.
//
// A text manifest "<file>.manifest" with one "key = value" per line records
// how the codebook was produced.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "grassquant/codebook.hpp"
#include "grassquant/errors.hpp"

namespace grassquant {

static_assert(std::endian::native == std::endian::little, "codebook I/O assumes a little-endian host");

inline constexpr std::array<char, 4> kCodebookMagic{'G', 'Q', 'C', 'B'};
inline constexpr std::uint32_t kCodebookFormatVersion = 1;

using AnyCodebook = std::variant<Codebook<double>, Codebook<Complex>>;
using Manifest = std::map<std::string, std::string>;

namespace detail {

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("truncated codebook file: " + path);
  return value;
}

}  // namespace detail

template <FieldScalar S>
void write_codebook(const std::string& path, const Codebook<S>& cb) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open codebook file for writing: " + path);
  out.write(kCodebookMagic.data(), kCodebookMagic.size());
  detail::put<std::uint32_t>(out, kCodebookFormatVersion);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(cb.n()));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(cb.p()));
  detail::put<std::uint8_t>(out, cb.field() == Field::Real ? 0 : 1);
  const std::array<char, 7> pad{};
  out.write(pad.data(), pad.size());
  detail::put<std::uint64_t>(out, cb.size());
  for (const auto& plane : cb.planes()) {
    const auto& b = plane.basis();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        if constexpr (std::same_as<S, double>) {
          detail::put<double>(out, b(i, j));
        } else {
          detail::put<double>(out, b(i, j).real());
          detail::put<double>(out, b(i, j).imag());
        }
      }
    }
  }
  if (!out) throw IoError("failed writing codebook file: " + path);
}

inline AnyCodebook read_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open codebook file: " + path);
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCodebookMagic) throw IoError("not a codebook file (bad magic): " + path);
  const auto version = detail::get<std::uint32_t>(in, path);
  if (version != kCodebookFormatVersion) throw IoError("unsupported codebook format version in " + path);
  const auto n = static_cast<int>(detail::get<std::uint32_t>(in, path));
  const auto p = static_cast<int>(detail::get<std::uint32_t>(in, path));
  const auto field_tag = detail::get<std::uint8_t>(in, path);
  std::array<char, 7> pad{};
  in.read(pad.data(), pad.size());
  const auto K = detail::get<std::uint64_t>(in, path);
  if (field_tag > 1) throw IoError("unknown field tag in codebook file: " + path);
  if (n < 1 || p < 1 || p > n || K < 1) throw IoError("invalid codebook header in " + path);

  auto load = [&]<FieldScalar S>() -> AnyCodebook {
    std::vector<Plane<S>> planes;
    planes.reserve(K);
    for (std::uint64_t k = 0; k < K; ++k) {
      Matrix<S> b(n, p);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
          if constexpr (std::same_as<S, double>) {
            b(i, j) = detail::get<double>(in, path);
          } else {
            const double re = detail::get<double>(in, path);
            const double im = detail::get<double>(in, path);
            b(i, j) = S(re, im);
          }
        }
      }
      try {
        planes.emplace_back(std::move(b));
      } catch (const ParameterError& e) {
        throw IoError("codeword " + std::to_string(k) + " in " + path + ": " + e.what());
      }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in codebook file: " + path);
    return Codebook<S>(std::move(planes));
  };
  return field_tag == 0 ? load.template operator()<double>() : load.template operator()<Complex>();
}

inline std::string manifest_path(const std::string& codebook_path) { return codebook_path + ".manifest"; }

inline void write_manifest(const std::string& path, const Manifest& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open manifest for writing: " + path);
  for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
  if (!out) throw IoError("failed writing manifest: " + path);
}

inline Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  Manifest entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw IoError("malformed manifest line in " + path + ": " + line);
    entries[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return entries;
}

}  // namespace grassquant

#endif  // GRASSQUANT_CODEBOOK_IO_HPP_
