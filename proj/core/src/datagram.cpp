#include "shire/datagram.hpp"

#include "shire/rng.hpp"

namespace shire {

AuthTag compute_auth_tag(const Datagram& d, AuthKey key) {
  std::uint64_t h = mix64(key ^ 0xa5a5a5a5a5a5a5a5ull);
  h = mix64(h ^ d.flow_id);
  h = mix64(h ^ d.seq);
  h = mix64(h ^ static_cast<std::uint64_t>(d.direction));
  h = mix64(h ^ (static_cast<std::uint64_t>(d.kind) << 8));
  h = mix64(h ^ d.payload_digest);
  return h;
}

std::uint64_t synth_payload_digest(FlowId flow, std::uint64_t seq,
                                   std::uint32_t len) {
  std::uint64_t h = mix64(0x7ea0c0de ^ static_cast<std::uint64_t>(flow) << 32);
  h = mix64(h ^ seq);
  h = mix64(h ^ len);
  return h;
}

}  // namespace shire
