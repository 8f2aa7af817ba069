#ifndef NANOMAC_CORE_FRAMES_HPP
#define NANOMAC_CORE_FRAMES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "core/status.hpp"

namespace nanomac::frames {

// 16-bit node identifier; 0xffff is the broadcast/unassigned sentinel and is
// used to pad short beacon address lists.
using ShortAddress = std::uint16_t;
constexpr ShortAddress kBroadcastAddress = 0xffff;

enum class FrameKind : std::uint8_t {
    Beacon = 0,
    Data = 1,
    Ack = 2,
    MacCommand = 3,
};

enum CommandId : std::uint8_t {
    kCmdAssociationRequest = 0x01,
    kCmdAssociationResponse = 0x02,
    kCmdDisassociationNotify = 0x03,
    kCmdDataRequest = 0x04,
};

// Octet layout (all multi-octet fields little-endian):
//   frame control (2) | sequence (1) | dest (2) | src (2) | [command id (1)]
//   | MSDU | FCS (2)
// Ack carries only frame control + sequence. MSDU sizes are fixed per kind:
// beacon 33 (superframe spec 2 + pending count 1 + 15 addresses), data 4,
// command 4, ack none.
struct MacFrame {
    FrameKind kind = FrameKind::Data;
    bool ack_request = false;
    bool frame_pending = false;
    std::uint8_t sequence = 0;
    ShortAddress dest = kBroadcastAddress;  // unused for Ack
    ShortAddress src = kBroadcastAddress;   // unused for Ack
    std::uint8_t command_id = 0;            // MacCommand only
    std::vector<std::uint8_t> payload;      // MSDU

    bool operator==(const MacFrame&) const = default;
};

// Structured view of the 33-octet beacon MSDU. The address list carries the
// entries the coordinator advertises this interval, padded with 0xffff; the
// first pending_count entries have downlink data queued.
struct BeaconPayload {
    std::array<std::uint8_t, 2> superframe_spec{};
    std::uint8_t pending_count = 0;
    std::array<ShortAddress, 15> addresses{};
};

constexpr std::size_t kBeaconMsduOctets = 33;
constexpr std::size_t kDataMsduOctets = 4;
constexpr std::size_t kCommandMsduOctets = 4;
constexpr std::size_t kFcsOctets = 2;
constexpr std::size_t kPhyOverheadOctets = 6;  // 4 preamble + 1 SFD + 1 length
constexpr std::uint8_t kSfd = 0xa7;

// PHY encapsulation: all-zero preamble, start-of-frame delimiter, then a
// length octet (7 bits used) that must equal the PSDU octet count.
struct PhyFrame {
    std::array<std::uint8_t, 5> sync_header{0x00, 0x00, 0x00, 0x00, kSfd};
    std::uint8_t phy_header = 0;
    std::vector<std::uint8_t> psdu;
};

PhyFrame phy_encapsulate(std::vector<std::uint8_t> mac_octets);
std::vector<std::uint8_t> phy_serialize(const PhyFrame& phy);

// Validates the sync header and the length octet against the actual size.
Status phy_decapsulate(std::span<const std::uint8_t> octets, PhyFrame& out);

MacFrame make_beacon(std::uint8_t sequence, ShortAddress src, const BeaconPayload& body);
MacFrame make_data(std::uint8_t sequence, ShortAddress dest, ShortAddress src,
                   std::span<const std::uint8_t> msdu, bool ack_request = true);
MacFrame make_ack(std::uint8_t sequence);
MacFrame make_command(std::uint8_t sequence, ShortAddress dest, ShortAddress src,
                      std::uint8_t command_id, std::span<const std::uint8_t> msdu,
                      bool ack_request = true);

Status beacon_payload(const MacFrame& frame, BeaconPayload& out);

// Base encoded size in bits, PHY encapsulation included:
// beacon 384, data 152, ack 88, command 160. scale in [0.5, 1.0] shrinks the
// size for the reduced-packet studies; rounding is to nearest, ties away
// from zero.
std::int64_t frame_bit_length(FrameKind kind, double scale);

// CRC-16, generator x^16 + x^12 + x^5 + 1, initial register 0, octets
// processed least-significant bit first, no final xor (the variant with check
// value 0x2189 over "123456789").
std::uint16_t compute_fcs(std::span<const std::uint8_t> octets);

// MAC serialization without PHY framing; appends the FCS.
Status serialize_mac(const MacFrame& frame, std::vector<std::uint8_t>& out);

// Full PHY encapsulation: preamble, SFD, length octet, PSDU.
Status encode_frame(const MacFrame& frame, std::vector<std::uint8_t>& out);

// Inverse of encode_frame. Validates the sync header, the length octet
// against the actual PSDU size, the FCS, and the kind-specific layout, in
// that order.
Status decode_frame(std::span<const std::uint8_t> octets, MacFrame& out);

// Bit views use LSB-first order within each octet.
std::vector<std::uint8_t> bits_from_octets(std::span<const std::uint8_t> octets);
Status octets_from_bits(std::span<const std::uint8_t> bits, std::vector<std::uint8_t>& out);

Status encode_frame_bits(const MacFrame& frame, std::vector<std::uint8_t>& out_bits);
Status decode_frame_bits(std::span<const std::uint8_t> bits, MacFrame& out);

} // namespace nanomac::frames

#endif
