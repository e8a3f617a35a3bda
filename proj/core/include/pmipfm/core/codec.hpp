#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmipfm/core/message.hpp"

namespace pmipfm {

/// Raised by decode() on truncated input, an unknown kind tag, a bad length
/// field or a field value outside its domain.
class MalformedMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical encoding:
///   u8 kind | u16 body length | body
/// where body = src, dst, sent_at (i64 microseconds), then the kind's fields
/// in declaration order. Integers are big-endian; strings and lists carry a
/// u16 length/count prefix; a prefix is 16 address octets plus a u8 length.
std::vector<std::uint8_t> encode(const ProtocolMessage& msg);

ProtocolMessage decode(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace pmipfm
