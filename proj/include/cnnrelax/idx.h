#ifndef CNNRELAX_IDX_H_
#define CNNRELAX_IDX_H_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cnnrelax {

// Element kinds of the IDX container, by their magic byte.
enum class IdxKind : std::uint8_t {
  kUint8 = 0x08,
  kInt8 = 0x09,
  kInt16 = 0x0B,
  kInt32 = 0x0C,
  kFloat32 = 0x0D,
  kFloat64 = 0x0E,
};

std::size_t element_size(IdxKind kind);

struct IdxTensor {
  IdxKind kind = IdxKind::kUint8;
  std::vector<std::uint32_t> dims;
  std::vector<double> data;  // row-major, every kind widened to double

  std::size_t element_count() const;
};

class IdxError : public std::runtime_error {
 public:
  enum class Code { kBadMagic, kTruncated, kUnknownKind, kTrailingBytes };

  IdxError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Big-endian header: two zero bytes, the kind byte, the rank, then one 32-bit
// size per dimension, then the payload.
IdxTensor parse_idx(std::string_view bytes);
std::string write_idx(const IdxTensor& tensor);

// Throws IoError when the file cannot be read or written.
IdxTensor read_idx_file(const std::string& path);
void write_idx_file(const IdxTensor& tensor, const std::string& path);

}  // namespace cnnrelax

#endif  // CNNRELAX_IDX_H_
