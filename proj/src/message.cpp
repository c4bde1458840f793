#include "distfl/message.hpp"

#include <string>

namespace distfl {

namespace {

constexpr int kTagBits = 3;

enum Tag : uint64_t {
  kAlphaAnnounce = 0,
  kRandomDraw = 1,
  kMaxRelay = 2,
  kOpenAnnounce = 3,
  kStatusAck = 4,
};

class BitWriter {
 public:
  void put(uint64_t value, int bits, const char* field) {
    if (bits < 64 && value >= (uint64_t{1} << bits))
      throw EncodingError(std::string(field) + " does not fit in " +
                          std::to_string(bits) + " bits");
    for (int b = 0; b < bits; ++b) {
      const int pos = bit_count_ + b;
      if (pos / 8 >= static_cast<int>(bytes_.size())) bytes_.push_back(0);
      if ((value >> b) & 1) bytes_[pos / 8] |= uint8_t(1) << (pos % 8);
    }
    bit_count_ += bits;
  }

  EncodedMessage finish() { return {std::move(bytes_), bit_count_}; }

 private:
  std::vector<uint8_t> bytes_;
  int bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const EncodedMessage& msg) : msg_(msg) {}

  uint64_t get(int bits) {
    uint64_t value = 0;
    for (int b = 0; b < bits; ++b) {
      const int pos = cursor_ + b;
      if (pos >= msg_.bit_size) throw EncodingError("truncated message");
      if ((msg_.bytes[pos / 8] >> (pos % 8)) & 1) value |= uint64_t{1} << b;
    }
    cursor_ += bits;
    return value;
  }

  void expect_end() const {
    if (cursor_ != msg_.bit_size) throw EncodingError("trailing bits in message");
  }

 private:
  const EncodedMessage& msg_;
  int cursor_ = 0;
};

FacilityStatus decode_fac_status(uint64_t v) {
  if (v > 2) throw EncodingError("bad facility status");
  return static_cast<FacilityStatus>(v);
}

}  // namespace

MessageWidths MessageWidths::for_nodes(int num_nodes) {
  int l = 0;
  while ((1 << l) < num_nodes) ++l;
  if (l < 1) l = 1;
  return {l, 3 * l, 2 * l + 12, l};
}

int bit_budget_for_nodes(int num_nodes) {
  return 4 * MessageWidths::for_nodes(num_nodes).log_n + 16;
}

EncodedMessage encode_message(const Payload& payload, const MessageWidths& w) {
  BitWriter bw;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AlphaAnnounce>) {
          bw.put(kAlphaAnnounce, kTagBits, "tag");
          bw.put(p.alpha_exponent, w.exponent_bits, "alpha exponent");
          bw.put(static_cast<uint64_t>(p.status), 1, "client status");
        } else if constexpr (std::is_same_v<T, RandomDraw>) {
          bw.put(kRandomDraw, kTagBits, "tag");
          bw.put(p.draw, w.draw_bits, "draw");
          bw.put(static_cast<uint64_t>(p.status), 2, "facility status");
        } else if constexpr (std::is_same_v<T, MaxRelay>) {
          bw.put(kMaxRelay, kTagBits, "tag");
          bw.put(p.has_value ? 1 : 0, 1, "presence flag");
          bw.put(p.has_value ? p.max_draw : 0, w.draw_bits, "max draw");
          bw.put(p.has_value ? p.owner : 0, w.id_bits, "owner id");
          bw.put(static_cast<uint64_t>(p.status), 1, "client status");
        } else if constexpr (std::is_same_v<T, OpenAnnounce>) {
          bw.put(kOpenAnnounce, kTagBits, "tag");
          bw.put(static_cast<uint64_t>(p.status), 2, "facility status");
          bw.put(p.this_round_opened ? 1 : 0, 1, "opened flag");
        } else if constexpr (std::is_same_v<T, StatusAck>) {
          bw.put(kStatusAck, kTagBits, "tag");
          bw.put(static_cast<uint64_t>(p.status), 1, "client status");
        }
      },
      payload);
  return bw.finish();
}

Payload decode_message(const EncodedMessage& msg, const MessageWidths& w) {
  BitReader br(msg);
  const uint64_t tag = br.get(kTagBits);
  Payload out;
  switch (tag) {
    case kAlphaAnnounce: {
      AlphaAnnounce p;
      p.alpha_exponent = br.get(w.exponent_bits);
      p.status = static_cast<ClientStatus>(br.get(1));
      out = p;
      break;
    }
    case kRandomDraw: {
      RandomDraw p;
      p.draw = br.get(w.draw_bits);
      p.status = decode_fac_status(br.get(2));
      out = p;
      break;
    }
    case kMaxRelay: {
      MaxRelay p;
      p.has_value = br.get(1) != 0;
      p.max_draw = br.get(w.draw_bits);
      p.owner = static_cast<uint32_t>(br.get(w.id_bits));
      if (!p.has_value) {
        p.max_draw = 0;
        p.owner = 0;
      }
      p.status = static_cast<ClientStatus>(br.get(1));
      out = p;
      break;
    }
    case kOpenAnnounce: {
      OpenAnnounce p;
      p.status = decode_fac_status(br.get(2));
      p.this_round_opened = br.get(1) != 0;
      out = p;
      break;
    }
    case kStatusAck: {
      StatusAck p;
      p.status = static_cast<ClientStatus>(br.get(1));
      out = p;
      break;
    }
    default:
      throw EncodingError("unknown message tag");
  }
  br.expect_end();
  return out;
}

}  // namespace distfl
