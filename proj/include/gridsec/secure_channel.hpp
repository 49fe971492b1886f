#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>

namespace gridsec {

using Block = std::array<std::uint8_t, 16>;
using Key = Block;
using Nonce = std::array<std::uint8_t, 12>;
using Tag = std::array<std::uint8_t, 8>;

inline constexpr std::size_t kWireSize = 40;
using WireBytes = std::array<std::uint8_t, kWireSize>;

/// The session counter cannot advance without wrapping; a new session is needed.
class SessionExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed plaintext: nonzero padding or a field wider than its slot.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Single-block AES-128 encryption.
class Aes128 {
 public:
  explicit Aes128(const Key& key);
  ~Aes128();
  Aes128(const Aes128&) = delete;
  Aes128& operator=(const Aes128&) = delete;

  Block encrypt(const Block& in) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class KeySet {
 public:
  KeySet(const Key& enc_key, const Key& mac_key);

  const Key& enc_key() const noexcept { return enc_key_; }
  const Key& mac_key() const noexcept { return mac_key_; }
  const Aes128& enc() const noexcept { return *enc_; }
  const Aes128& mac() const noexcept { return *mac_; }

  bool operator==(const KeySet& o) const noexcept { return enc_key_ == o.enc_key_ && mac_key_ == o.mac_key_; }

 private:
  Key enc_key_;
  Key mac_key_;
  std::shared_ptr<const Aes128> enc_;
  std::shared_ptr<const Aes128> mac_;
};

struct AeState {
  Nonce nonce{};
  std::uint32_t counter = 0;

  bool operator==(const AeState&) const = default;
};

struct CipherMessage {
  Block c0{};
  Block c1{};
  Tag mac{};

  WireBytes to_bytes() const noexcept;
  static CipherMessage from_bytes(const WireBytes& bytes) noexcept;
  bool operator==(const CipherMessage&) const = default;
};

struct Plaintext {
  Block m0{};
  Block m1{};

  bool operator==(const Plaintext&) const = default;
};

/// CTR input block: nonce (96 bits) followed by the big-endian counter.
Block counter_block(const Nonce& nonce, std::uint32_t counter) noexcept;

/// Leftmost 64 bits of a zero-IV CBC-MAC over counter_block(nonce, counter),
/// C0 and C1. Binding the starting counter makes an off-window message fail.
Tag compute_tag(const KeySet& keys, const AeState& state, const Block& c0, const Block& c1);

/// Encrypt-then-MAC of two blocks; the returned state has advanced by 2.
std::pair<CipherMessage, AeState> ae_encrypt(const KeySet& keys, const AeState& state, const Block& m0,
                                             const Block& m1);

struct DecryptResult {
  std::optional<Plaintext> plain;  // withheld when the tag does not verify
  AeState state;                   // advanced by 2 only on success

  bool mac_ok() const noexcept { return plain.has_value(); }
};

DecryptResult ae_decrypt(const KeySet& keys, const AeState& state, const CipherMessage& msg);

/// K_s = E_K0(r_s), K_s' = E_K0(r_s + 1 mod 2^128), both under the long-term
/// encryption key.
KeySet derive_session_keys(const KeySet& long_term, const Block& r_s);

/// r + 1 modulo 2^128, big-endian.
Block increment_block(Block r) noexcept;

/// Flips the top bit of the nonce. Node-to-authority traffic runs on this
/// nonce so the two directions never share a keystream block.
Nonce uplink_nonce(Nonce nonce) noexcept;

// ---- codec ---------------------------------------------------------------

/// MSB-first bit packing into a fixed 256-bit buffer.
class BitWriter {
 public:
  void put(std::uint64_t value, int bits);
  void put_bytes(std::span<const std::uint8_t> bytes);
  int position() const noexcept { return pos_; }
  Plaintext finish() const;

 private:
  std::array<std::uint8_t, 32> buf_{};
  int pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const Plaintext& p) noexcept;
  std::uint64_t get(int bits);
  void get_bytes(std::span<std::uint8_t> out);
  int position() const noexcept { return pos_; }

 private:
  std::array<std::uint8_t, 32> buf_{};
  int pos_ = 0;
};

inline constexpr std::size_t kModelParamBytes = 26;  // 208 bits
using ModelParamBits = std::array<std::uint8_t, kModelParamBytes>;

struct RequestPlain {
  std::uint16_t model_controls = 0;
  ModelParamBits model_params{};
  std::uint32_t time = 0;

  bool operator==(const RequestPlain&) const = default;
};

/// Delegated detection settings carried in the 208 parameter bits:
/// lower and upper thresholds as IEEE float32, dos_timeout (16), 128 reserved.
struct NodeModelParams {
  float lower_threshold = -1.0e30f;
  float upper_threshold = 1.0e30f;
  std::uint16_t dos_timeout = 3;

  bool operator==(const NodeModelParams&) const = default;
};

ModelParamBits encode_model_params(const NodeModelParams& p);
NodeModelParams decode_model_params(const ModelParamBits& bits);

/// Bits of the 24-bit alarm status field.
enum AlarmBit : std::uint32_t {
  kLocalThresholdAlarm = 1u << 0,
  kBufferUnderrun = 1u << 1,
  kResyncOccurred = 1u << 2,
  kDosSuspected = 1u << 3,
};

inline constexpr std::size_t kHistoryDepth = 8;

struct ReportPlain {
  std::uint32_t model_metrics = 0;
  std::uint32_t alarm_status = 0;  // 24 bits
  std::uint32_t timestamp = 0;
  std::array<std::uint16_t, kHistoryDepth> history{};  // 15-bit codes, newest first

  bool operator==(const ReportPlain&) const = default;
};

/// Two signed Q7.8 means packed into 32 bits (first mean in the high half).
std::uint32_t pack_model_metrics(double buffer_mean, double recent_mean) noexcept;
std::pair<double, double> unpack_model_metrics(std::uint32_t packed) noexcept;

Plaintext encode_request(const RequestPlain& r);
RequestPlain decode_request(const Plaintext& p);
Plaintext encode_report(const ReportPlain& r);
ReportPlain decode_report(const Plaintext& p);

struct InitPlain {
  Block r_s{};
  Nonce n_s{};
  std::uint32_t c_s = 0;

  bool operator==(const InitPlain&) const = default;
};

Plaintext encode_init(const InitPlain& i);
InitPlain decode_init(const Plaintext& p);

/// Unsigned 15-bit fixed point over [offset, offset + full_scale).
struct SampleScale {
  double offset = 0.0;
  double full_scale = 2.0;

  std::uint16_t quantise(double value) const noexcept;
  double dequantise(std::uint16_t code) const noexcept;
  double lsb() const noexcept { return full_scale / 32768.0; }
  bool operator==(const SampleScale&) const = default;
};

inline constexpr std::uint16_t kMaxSampleCode = 0x7FFF;

}  // namespace gridsec
