#pragma once

// Wire format for the synchronous simulator. Every payload encodes into a
// fixed-width bit string whose exact length is charged against the per-message
// bit budget B(n) = 4*ceil(log2 n) + 16.

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace distfl {

enum class ClientStatus : uint8_t { NotConnected = 0, Connected = 1 };
enum class FacilityStatus : uint8_t { Closed = 0, CurrentlyPaid = 1, Open = 2 };

// alpha values travel as the exponent t of alpha = (1+eps)^t, which keeps the
// payloads logarithmic in the cost magnitudes.
struct AlphaAnnounce {
  uint64_t alpha_exponent = 0;
  ClientStatus status = ClientStatus::NotConnected;
  bool operator==(const AlphaAnnounce&) const = default;
};

struct RandomDraw {
  uint64_t draw = 0;  // K = 3*ceil(log2 n) fresh bits
  FacilityStatus status = FacilityStatus::Closed;
  bool operator==(const RandomDraw&) const = default;
};

struct MaxRelay {
  bool has_value = false;  // false when the client saw no eligible facility
  uint64_t max_draw = 0;
  uint32_t owner = 0;  // facility id holding the maximum, the tiebreaker
  ClientStatus status = ClientStatus::NotConnected;
  bool operator==(const MaxRelay&) const = default;
};

struct OpenAnnounce {
  FacilityStatus status = FacilityStatus::Closed;
  bool this_round_opened = false;
  bool operator==(const OpenAnnounce&) const = default;
};

struct StatusAck {
  ClientStatus status = ClientStatus::NotConnected;
  bool operator==(const StatusAck&) const = default;
};

using Payload =
    std::variant<AlphaAnnounce, RandomDraw, MaxRelay, OpenAnnounce, StatusAck>;

struct EncodedMessage {
  std::vector<uint8_t> bytes;
  int bit_size = 0;
};

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field widths for an n-node system.
struct MessageWidths {
  int log_n;         // ceil(log2 n)
  int draw_bits;     // 3*log_n
  int exponent_bits; // 2*log_n + 12, always within the budget headroom
  int id_bits;       // log_n

  static MessageWidths for_nodes(int num_nodes);
};

// Bit budget B(n).
int bit_budget_for_nodes(int num_nodes);

EncodedMessage encode_message(const Payload& payload, const MessageWidths& w);
Payload decode_message(const EncodedMessage& msg, const MessageWidths& w);

}  // namespace distfl
