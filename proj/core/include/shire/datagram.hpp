#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shire {

enum class Direction : std::uint8_t { Up, Down };
enum class PayloadKind : std::uint8_t { Data, Probe };

using FlowId = std::uint32_t;
using AuthKey = std::uint64_t;
using AuthTag = std::uint64_t;

// End-to-end unit of traffic. seq is strictly increasing per (flow,
// direction) at the origin and survives retransmissions unchanged, so the
// proxy can deduplicate.
struct Datagram {
  FlowId flow_id = 0;
  std::uint64_t seq = 0;
  Direction direction = Direction::Up;
  PayloadKind kind = PayloadKind::Data;
  std::uint32_t payload_len = 0;
  std::uint64_t payload_digest = 0;
  std::string src_locator;             // current NIC address; changes on NIC switch
  AuthTag auth_tag = 0;
  std::vector<std::string> hop_trace;  // traversed entity ids
};

// Keyed tag over the identity-bearing fields only (flow, seq, direction,
// kind, payload digest). src_locator and hop_trace stay outside the tag on
// purpose: the proxy must recognize the sender no matter which path or
// address the datagram used.
AuthTag compute_auth_tag(const Datagram& d, AuthKey key);

inline void sign(Datagram& d, AuthKey key) { d.auth_tag = compute_auth_tag(d, key); }
inline bool verify(const Datagram& d, AuthKey key) {
  return d.auth_tag == compute_auth_tag(d, key);
}

// Stand-in for hashing real payload bytes; the model carries no content.
std::uint64_t synth_payload_digest(FlowId flow, std::uint64_t seq,
                                   std::uint32_t len);

}  // namespace shire
