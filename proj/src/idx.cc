#include "cnnrelax/idx.h"

#include <bit>
#include <cstring>
#include <limits>

#include "cnnrelax/errors.h"
#include "cnnrelax/serialize.h"

namespace cnnrelax {
namespace {

std::uint64_t read_be(const unsigned char* p, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = (v << 8) | p[i];
  return v;
}

void write_be(std::string& out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = width; i-- > 0;) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

bool known_kind(std::uint8_t code) {
  switch (code) {
    case 0x08: case 0x09: case 0x0B: case 0x0C: case 0x0D: case 0x0E:
      return true;
    default:
      return false;
  }
}

double decode(IdxKind kind, const unsigned char* p) {
  const std::uint64_t raw = read_be(p, element_size(kind));
  switch (kind) {
    case IdxKind::kUint8: return static_cast<double>(raw);
    case IdxKind::kInt8: return static_cast<std::int8_t>(raw);
    case IdxKind::kInt16: return static_cast<std::int16_t>(raw);
    case IdxKind::kInt32: return static_cast<std::int32_t>(raw);
    case IdxKind::kFloat32:
      return std::bit_cast<float>(static_cast<std::uint32_t>(raw));
    case IdxKind::kFloat64: return std::bit_cast<double>(raw);
  }
  return 0.0;
}

std::uint64_t encode(IdxKind kind, double v) {
  switch (kind) {
    case IdxKind::kUint8: return static_cast<std::uint8_t>(v);
    case IdxKind::kInt8:
      return static_cast<std::uint8_t>(static_cast<std::int8_t>(v));
    case IdxKind::kInt16:
      return static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
    case IdxKind::kInt32:
      return static_cast<std::uint32_t>(static_cast<std::int32_t>(v));
    case IdxKind::kFloat32:
      return std::bit_cast<std::uint32_t>(static_cast<float>(v));
    case IdxKind::kFloat64: return std::bit_cast<std::uint64_t>(v);
  }
  return 0;
}

}  // namespace

std::size_t element_size(IdxKind kind) {
  switch (kind) {
    case IdxKind::kUint8:
    case IdxKind::kInt8: return 1;
    case IdxKind::kInt16: return 2;
    case IdxKind::kInt32:
    case IdxKind::kFloat32: return 4;
    case IdxKind::kFloat64: return 8;
  }
  return 0;
}

std::size_t IdxTensor::element_count() const {
  std::size_t count = 1;
  for (std::uint32_t d : dims) count *= d;
  return count;
}

IdxTensor parse_idx(std::string_view bytes) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 4) {
    throw IdxError(IdxError::Code::kTruncated, "IDX header shorter than 4 bytes");
  }
  if (p[0] != 0 || p[1] != 0) {
    throw IdxError(IdxError::Code::kBadMagic,
                   "IDX magic must start with two zero bytes");
  }
  if (!known_kind(p[2])) {
    throw IdxError(IdxError::Code::kUnknownKind,
                   "unknown IDX element code " + std::to_string(p[2]));
  }
  IdxTensor out;
  out.kind = static_cast<IdxKind>(p[2]);
  const std::size_t rank = p[3];
  const std::size_t header = 4 + 4 * rank;
  if (bytes.size() < header) {
    throw IdxError(IdxError::Code::kTruncated, "IDX dimension list is truncated");
  }
  std::size_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    const auto dim = static_cast<std::uint32_t>(read_be(p + 4 + 4 * i, 4));
    out.dims.push_back(dim);
    if (dim != 0 && count > std::numeric_limits<std::size_t>::max() / 8 / dim) {
      throw IdxError(IdxError::Code::kTruncated, "IDX dimensions overflow");
    }
    count *= dim;
  }
  const std::size_t width = element_size(out.kind);
  const std::size_t payload = bytes.size() - header;
  if (payload < count * width) {
    throw IdxError(IdxError::Code::kTruncated,
                   "IDX payload has " + std::to_string(payload) +
                       " bytes, expected " + std::to_string(count * width));
  }
  if (payload > count * width) {
    throw IdxError(IdxError::Code::kTrailingBytes,
                   "IDX payload has " + std::to_string(payload - count * width) +
                       " unexpected trailing bytes");
  }
  out.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.data[i] = decode(out.kind, p + header + i * width);
  }
  return out;
}

std::string write_idx(const IdxTensor& tensor) {
  if (tensor.dims.size() > 255) {
    throw std::invalid_argument("IDX rank is limited to 255");
  }
  if (tensor.data.size() != tensor.element_count()) {
    throw std::invalid_argument("IDX data size does not match its dimensions");
  }
  std::string out;
  const std::size_t width = element_size(tensor.kind);
  out.reserve(4 + 4 * tensor.dims.size() + width * tensor.data.size());
  out.push_back(0);
  out.push_back(0);
  out.push_back(static_cast<char>(tensor.kind));
  out.push_back(static_cast<char>(tensor.dims.size()));
  for (std::uint32_t d : tensor.dims) write_be(out, d, 4);
  for (double v : tensor.data) write_be(out, encode(tensor.kind, v), width);
  return out;
}

IdxTensor read_idx_file(const std::string& path) {
  const std::string bytes = read_file(path);
  try {
    return parse_idx(bytes);
  } catch (const IdxError& e) {
    throw IdxError(e.code(), path + ": " + e.what());
  }
}

void write_idx_file(const IdxTensor& tensor, const std::string& path) {
  write_file(path, write_idx(tensor));
}

}  // namespace cnnrelax
