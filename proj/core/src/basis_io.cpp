#include "gtopt/basis_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gtopt {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// Fortran D exponents ("0.3425D+01") appear in most published basis files.
double parse_fortran_double(std::string tok) {
  for (char& c : tok)
    if (c == 'D' || c == 'd') c = 'E';
  std::size_t pos = 0;
  double v = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("bad number: " + tok);
  return v;
}

std::string normalize_element(std::string sym) {
  if (sym.empty()) return sym;
  sym[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sym[0])));
  for (std::size_t i = 1; i < sym.size(); ++i)
    sym[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(sym[i])));
  return sym;
}

const std::map<std::string, double>& element_table() {
  static const std::map<std::string, double> table = {
      {"H", 1},   {"He", 2},  {"Li", 3},  {"Be", 4},  {"B", 5},   {"C", 6},
      {"N", 7},   {"O", 8},   {"F", 9},   {"Ne", 10}, {"Na", 11}, {"Mg", 12},
      {"Al", 13}, {"Si", 14}, {"P", 15},  {"S", 16},  {"Cl", 17}, {"Ar", 18},
      {"K", 19},  {"Ca", 20}, {"Sc", 21}, {"Ti", 22}, {"V", 23},  {"Cr", 24},
      {"Mn", 25}, {"Fe", 26}, {"Co", 27}, {"Ni", 28}, {"Cu", 29}, {"Zn", 30},
      {"Ga", 31}, {"Ge", 32}, {"As", 33}, {"Se", 34}, {"Br", 35}, {"Kr", 36}};
  return table;
}

}  // namespace

int Shell::l() const {
  switch (type) {
    case 'S': return 0;
    case 'P': return 1;
    case 'D': return 2;
    case 'F': return 3;
  }
  throw std::invalid_argument(std::string("unknown shell type ") + type);
}

std::vector<std::array<int, 3>> Shell::cartesian_angs() const {
  const int L = l();
  std::vector<std::array<int, 3>> out;
  for (int i = L; i >= 0; --i)
    for (int j = L - i; j >= 0; --j) out.push_back({i, j, L - i - j});
  return out;
}

ElementShells parse_gaussian94(const std::string& text) {
  ElementShells result;
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '!') continue;
    lines.push_back(t);
  }

  std::size_t i = 0;
  while (i < lines.size()) {
    if (lines[i] == "****") {  // stray separators between blocks
      ++i;
      continue;
    }
    auto head = split_ws(lines[i]);
    if (head.empty()) throw std::invalid_argument("gaussian94: malformed element line");
    std::string element = normalize_element(head[0]);
    ++i;

    auto& shells = result[element];
    while (i < lines.size() && lines[i] != "****") {
      auto sh = split_ws(lines[i]);
      if (sh.size() < 2)
        throw std::invalid_argument("gaussian94: malformed shell header '" + lines[i] + "'");
      std::string type = sh[0];
      std::transform(type.begin(), type.end(), type.begin(), ::toupper);
      int nprim = 0;
      try {
        nprim = std::stoi(sh[1]);
      } catch (const std::exception&) {
        throw std::invalid_argument("gaussian94: bad primitive count in '" + lines[i] + "'");
      }
      if (nprim <= 0)
        throw std::invalid_argument("gaussian94: bad primitive count in '" + lines[i] + "'");
      ++i;

      const bool is_sp = (type == "SP" || type == "L");
      if (!is_sp && (type.size() != 1 || std::string("SPDF").find(type[0]) == std::string::npos))
        throw std::invalid_argument("gaussian94: unknown shell letter '" + type + "'");

      Shell s1, s2;
      s1.type = is_sp ? 'S' : type[0];
      s2.type = 'P';
      for (int n = 0; n < nprim; ++n) {
        if (i >= lines.size())
          throw std::invalid_argument("gaussian94: primitive row count mismatch");
        auto row = split_ws(lines[i]);
        const std::size_t want = is_sp ? 3 : 2;
        if (row.size() != want)
          throw std::invalid_argument("gaussian94: expected " + std::to_string(want) +
                                      " columns in '" + lines[i] + "'");
        double e = parse_fortran_double(row[0]);
        s1.exponents.push_back(e);
        s1.coefficients.push_back(parse_fortran_double(row[1]));
        if (is_sp) {
          s2.exponents.push_back(e);
          s2.coefficients.push_back(parse_fortran_double(row[2]));
        }
        ++i;
      }
      shells.push_back(std::move(s1));
      if (is_sp) shells.push_back(std::move(s2));
    }
    if (i < lines.size()) ++i;  // consume ****
  }
  return result;
}

ElementShells load_gaussian94_file(const std::string& path) {
  return parse_gaussian94(read_text_file(path));
}

double element_charge(const std::string& symbol) {
  auto it = element_table().find(normalize_element(symbol));
  if (it == element_table().end())
    throw std::invalid_argument("unknown element '" + symbol + "'");
  return it->second;
}

Geometry parse_xyz(const std::string& text, LengthUnit unit) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("xyz: empty input");
  int count = 0;
  try {
    count = std::stoi(trim(line));
  } catch (const std::exception&) {
    throw std::invalid_argument("xyz: bad atom count line '" + line + "'");
  }
  std::getline(is, line);  // comment, may be absent for count 0

  Geometry geo;
  const double to_bohr = unit == LengthUnit::Bohr ? 1.0 : kBohrPerAngstrom;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    auto tok = split_ws(t);
    if (tok.size() != 4) throw std::invalid_argument("xyz: malformed atom line '" + line + "'");
    std::string sym = normalize_element(tok[0]);
    Eigen::Vector3d r(parse_fortran_double(tok[1]), parse_fortran_double(tok[2]),
                      parse_fortran_double(tok[3]));
    geo.field.nuclei.push_back(Nucleus{r * to_bohr, element_charge(sym)});
    geo.elements.push_back(sym);
  }
  if (static_cast<int>(geo.elements.size()) != count)
    throw std::invalid_argument("xyz: atom count mismatch (header " + std::to_string(count) +
                                ", rows " + std::to_string(geo.elements.size()) + ")");
  return geo;
}

Geometry load_xyz_file(const std::string& path, LengthUnit unit) {
  return parse_xyz(read_text_file(path), unit);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace gtopt
