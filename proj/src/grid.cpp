// SPDX-License-Identifier: Apache-2.0
#include "hjsort/grid.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "hjsort/error.hpp"

namespace hjsort {

GridSpec::GridSpec(int n, std::int64_t m) : n_(n), m_(m), node_count_(1) {
  if (n < 2 || n > kMaxDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "dimension must lie in [2, " + std::to_string(kMaxDim) + "], got " + std::to_string(n));
  }
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "subdivisions m must be >= 1, got " + std::to_string(m));
  const std::int64_t per_axis = m + 1;
  for (int j = 0; j < n; ++j) {
    if (node_count_ > std::numeric_limits<std::int64_t>::max() / per_axis)
      throw Error(ErrorCode::kResource, "grid node count overflows 64-bit indexing");
    node_count_ *= per_axis;
  }
}

std::int64_t linear_index(const GridSpec& spec, const MultiIndex& idx) {
  std::int64_t linear = 0;
  for (int j = 0; j < spec.dim(); ++j) linear = linear * spec.nodes_per_axis() + idx[j];
  return linear;
}

MultiIndex multi_index(const GridSpec& spec, std::int64_t linear) {
  MultiIndex idx;
  idx.n = spec.dim();
  for (int j = spec.dim() - 1; j >= 0; --j) {
    idx[j] = linear % spec.nodes_per_axis();
    linear /= spec.nodes_per_axis();
  }
  return idx;
}

std::vector<std::int64_t> backward_offsets(const GridSpec& spec) {
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(spec.dim()));
  std::int64_t stride = 1;
  for (int j = spec.dim() - 1; j >= 0; --j) {
    offsets[static_cast<std::size_t>(j)] = stride;
    stride *= spec.nodes_per_axis();
  }
  return offsets;
}

bool on_boundary(const MultiIndex& idx) {
  for (int j = 0; j < idx.n; ++j)
    if (idx[j] == 0) return true;
  return false;
}

bool advance(MultiIndex& idx, std::int64_t m) {
  for (int j = idx.n - 1; j >= 0; --j) {
    if (idx[j] < m) {
      ++idx[j];
      return true;
    }
    idx[j] = 0;
  }
  return false;
}

SweepOrder::iterator::iterator(std::int64_t last, std::int64_t remaining, int n)
    : last_(last), remaining_(remaining) {
  idx_.n = n;
}

SweepOrder::iterator& SweepOrder::iterator::operator++() {
  --remaining_;
  advance(idx_, last_);
  return *this;
}

GridField::GridField(GridSpec spec, double fill)
    : spec_(spec), values_(static_cast<std::size_t>(spec.node_count()), fill) {}

GridField::GridField(GridSpec spec, std::vector<double> values) : spec_(spec), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != spec_.node_count())
    throw Error(ErrorCode::kInvalidArgument, "field value count does not match grid node count");
}

RollingWindow::RollingWindow(const GridSpec& spec) {
  std::int64_t slab = 1;
  for (int j = 1; j < spec.dim(); ++j) slab *= spec.nodes_per_axis();
  values_.assign(static_cast<std::size_t>(slab + 1), 0.0);
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
bool get_le(std::istream& in, T& value) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  std::memcpy(&value, bytes, sizeof(T));
  return true;
}

}  // namespace

void write_field_binary(const GridField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  put_le<std::int64_t>(out, field.spec().dim());
  put_le<std::int64_t>(out, field.spec().m());
  for (double v : field.values()) put_le(out, v);
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

GridField read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::int64_t n = 0;
  std::int64_t m = 0;
  if (!get_le(in, n) || !get_le(in, m)) throw Error(ErrorCode::kParse, "'" + path + "': truncated header");
  if (n < 2 || n > kMaxDim || m < 1) throw Error(ErrorCode::kParse, "'" + path + "': invalid header");
  GridSpec spec(static_cast<int>(n), m);
  std::vector<double> values(static_cast<std::size_t>(spec.node_count()));
  for (double& v : values) {
    if (!get_le(in, v)) throw Error(ErrorCode::kParse, "'" + path + "': truncated value block");
  }
  char extra = 0;
  if (in.read(&extra, 1)) throw Error(ErrorCode::kParse, "'" + path + "': trailing bytes after value block");
  return GridField(spec, std::move(values));
}

void write_field_csv(const GridField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.precision(17);
  const GridSpec& spec = field.spec();
  std::int64_t linear = 0;
  for (const MultiIndex& idx : sweep_order(spec)) {
    for (int j = 0; j < spec.dim(); ++j) out << spec.coordinate(idx[j]) << ',';
    out << field[linear++] << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

}  // namespace hjsort
