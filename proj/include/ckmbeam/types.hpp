// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckmbeam {

using cdouble = std::complex<double>;
using CVector = std::vector<cdouble>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
double distance(Vec2 a, Vec2 b);

/// Address of a hierarchical codeword. Layers and indices are 1-based;
/// layer 0 is reserved for the virtual omnidirectional root.
struct BeamId {
  int layer = 0;
  int index = 0;

  friend auto operator<=>(const BeamId&, const BeamId&) = default;
};

inline constexpr BeamId kVirtualRoot{0, 1};

std::string to_string(BeamId b);

/// Malformed serialized data (CKM files, result CSVs).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A weight table carries no positive potential, so no search tree exists.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ckmbeam
