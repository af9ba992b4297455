#pragma once

#include <map>
#include <string>
#include <vector>

#include "gtopt/gto.hpp"

namespace gtopt {

/// One shell parsed from a Gaussian94 basis file. SP blocks are split into
/// separate S and P shells with duplicated exponents.
struct Shell {
  char type = 'S';  // S, P, D, F
  std::vector<double> exponents;
  std::vector<double> coefficients;

  int l() const;
  /// Cartesian angular functions of this shell, e.g. P -> (100),(010),(001).
  std::vector<std::array<int, 3>> cartesian_angs() const;
};

using ElementShells = std::map<std::string, std::vector<Shell>>;

/// Parses Gaussian94 basis text (element blocks, shell header rows,
/// exponent/coefficient rows, **** separators). Empty text parses to an
/// empty map.
ElementShells parse_gaussian94(const std::string& text);
ElementShells load_gaussian94_file(const std::string& path);

enum class LengthUnit { Bohr, Angstrom };
constexpr double kBohrPerAngstrom = 1.8897259886;

struct Geometry {
  NuclearField field;                 // positions in bohr
  std::vector<std::string> elements;  // element symbol per nucleus
};

/// Parses XYZ text: count line, comment line, `element x y z` rows.
Geometry parse_xyz(const std::string& text, LengthUnit unit);
Geometry load_xyz_file(const std::string& path, LengthUnit unit);

/// Nuclear charge for an element symbol (H..Kr); throws on unknown symbols.
double element_charge(const std::string& symbol);

std::string read_text_file(const std::string& path);

}  // namespace gtopt
