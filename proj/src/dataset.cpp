#include "trigan/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "trigan/errors.hpp"

namespace tgan {

std::size_t PairDataset::component_count() const {
  int hi = -1;
  for (const auto& r : rows) hi = std::max(hi, r.component);
  return static_cast<std::size_t>(hi + 1);
}

std::size_t PairDataset::paired_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const PairRow& r) { return r.paired; }));
}

std::vector<std::size_t> PairDataset::paired_per_component() const {
  std::vector<std::size_t> counts(component_count(), 0);
  for (const auto& r : rows)
    if (r.paired) ++counts[static_cast<std::size_t>(r.component)];
  return counts;
}

std::vector<std::size_t> PairDataset::paired_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].paired) idx.push_back(i);
  return idx;
}

std::vector<Point2> PairDataset::points() const {
  std::vector<Point2> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back({r.x, r.y});
  return pts;
}

PairDataset split_semi_supervised(const PairDataset& dataset, double fraction,
                                  std::uint64_t seed) {
  require(fraction >= 0.0 && fraction <= 1.0,
          "paired-fraction must lie in [0, 1], got " + std::to_string(fraction));
  PairDataset out = dataset;
  for (auto& r : out.rows) r.paired = false;
  const std::size_t ncomp = out.component_count();
  if (ncomp == 0) return out;

  const auto total = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(out.size())));
  std::vector<std::vector<std::size_t>> members(ncomp);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    require(out.rows[i].component >= 0, "dataset: negative component index");
    members[static_cast<std::size_t>(out.rows[i].component)].push_back(i);
  }

  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < ncomp; ++c) {
    const std::size_t quota = total / ncomp + (c < total % ncomp ? 1 : 0);
    require(quota <= members[c].size(),
            "split_semi_supervised: component " + std::to_string(c) + " has " +
                std::to_string(members[c].size()) + " rows, needs " + std::to_string(quota));
    std::shuffle(members[c].begin(), members[c].end(), rng);
    for (std::size_t k = 0; k < quota; ++k) out.rows[members[c][k]].paired = true;
  }
  return out;
}

void write_dataset_csv(const PairDataset& dataset, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "x,y,component,paired\n";
  char buf[96];
  for (const auto& r : dataset.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n", r.x, r.y, r.component,
                  r.paired ? 1 : 0);
    os << buf;
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line, const char* name) {
  T v{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("line " + std::to_string(line) + ": invalid " + name + " '" +
                     std::string(field) + "'");
  return v;
}

}  // namespace

PairDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw ParseError(path.string() + ": empty file, expected header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,component,paired")
    throw ParseError(path.string() + ": line 1: missing header 'x,y,component,paired'");

  PairDataset ds;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 4)
      throw ParseError("line " + std::to_string(lineno) + ": expected 4 fields, got " +
                       std::to_string(f.size()));
    PairRow r;
    r.x = parse_field<double>(f[0], lineno, "x");
    r.y = parse_field<double>(f[1], lineno, "y");
    r.component = parse_field<int>(f[2], lineno, "component");
    const int paired = parse_field<int>(f[3], lineno, "paired");
    if ((paired != 0 && paired != 1) || r.component < 0 || !std::isfinite(r.x) ||
        !std::isfinite(r.y))
      throw ParseError("line " + std::to_string(lineno) + ": value out of range");
    r.paired = paired == 1;
    ds.rows.push_back(r);
  }
  if (ds.rows.empty()) throw ParseError(path.string() + ": no data rows");
  return ds;
}

}  // namespace tgan
