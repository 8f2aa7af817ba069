#include "core/frames.hpp"

#include <algorithm>
#include <cmath>

namespace nanomac::frames {

namespace {

constexpr std::size_t mhr_octets(FrameKind kind) {
    switch (kind) {
        case FrameKind::Beacon:
        case FrameKind::Data: return 7;
        case FrameKind::Ack: return 3;
        case FrameKind::MacCommand: return 8;
    }
    return 0;
}

constexpr std::size_t msdu_octets(FrameKind kind) {
    switch (kind) {
        case FrameKind::Beacon: return kBeaconMsduOctets;
        case FrameKind::Data: return kDataMsduOctets;
        case FrameKind::Ack: return 0;
        case FrameKind::MacCommand: return kCommandMsduOctets;
    }
    return 0;
}

constexpr std::size_t mac_octets(FrameKind kind) {
    return mhr_octets(kind) + msdu_octets(kind) + kFcsOctets;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(std::uint8_t(v & 0xff));
    out.push_back(std::uint8_t(v >> 8));
}

std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t at) {
    return std::uint16_t(in[at]) | std::uint16_t(in[at + 1]) << 8;
}

} // namespace

MacFrame make_beacon(std::uint8_t sequence, ShortAddress src, const BeaconPayload& body) {
    MacFrame f;
    f.kind = FrameKind::Beacon;
    f.sequence = sequence;
    f.dest = kBroadcastAddress;
    f.src = src;
    f.frame_pending = body.pending_count > 0;
    f.payload.reserve(kBeaconMsduOctets);
    f.payload.push_back(body.superframe_spec[0]);
    f.payload.push_back(body.superframe_spec[1]);
    f.payload.push_back(body.pending_count);
    for (ShortAddress a : body.addresses) put_u16(f.payload, a);
    return f;
}

MacFrame make_data(std::uint8_t sequence, ShortAddress dest, ShortAddress src,
                   std::span<const std::uint8_t> msdu, bool ack_request) {
    MacFrame f;
    f.kind = FrameKind::Data;
    f.ack_request = ack_request;
    f.sequence = sequence;
    f.dest = dest;
    f.src = src;
    f.payload.assign(msdu.begin(), msdu.end());
    return f;
}

MacFrame make_ack(std::uint8_t sequence) {
    MacFrame f;
    f.kind = FrameKind::Ack;
    f.sequence = sequence;
    return f;
}

MacFrame make_command(std::uint8_t sequence, ShortAddress dest, ShortAddress src,
                      std::uint8_t command_id, std::span<const std::uint8_t> msdu,
                      bool ack_request) {
    MacFrame f;
    f.kind = FrameKind::MacCommand;
    f.ack_request = ack_request;
    f.sequence = sequence;
    f.dest = dest;
    f.src = src;
    f.command_id = command_id;
    f.payload.assign(msdu.begin(), msdu.end());
    return f;
}

Status beacon_payload(const MacFrame& frame, BeaconPayload& out) {
    if (frame.kind != FrameKind::Beacon || frame.payload.size() != kBeaconMsduOctets)
        return Status::InvalidPayloadLength;
    out.superframe_spec = {frame.payload[0], frame.payload[1]};
    out.pending_count = frame.payload[2];
    for (std::size_t i = 0; i < out.addresses.size(); ++i)
        out.addresses[i] = get_u16(frame.payload, 3 + 2 * i);
    return Status::Ok;
}

std::int64_t frame_bit_length(FrameKind kind, double scale) {
    const auto base = double(8 * (kPhyOverheadOctets + mac_octets(kind)));
    return std::llround(scale * base);
}

std::uint16_t compute_fcs(std::span<const std::uint8_t> octets) {
    std::uint16_t crc = 0x0000;
    for (std::uint8_t byte : octets) {
        crc ^= byte;
        for (int bit = 0; bit < 8; ++bit)
            crc = (crc & 1u) ? std::uint16_t((crc >> 1) ^ 0x8408) : std::uint16_t(crc >> 1);
    }
    return crc;
}

Status serialize_mac(const MacFrame& frame, std::vector<std::uint8_t>& out) {
    if (frame.payload.size() != msdu_octets(frame.kind)) return Status::InvalidPayloadLength;

    out.clear();
    out.reserve(mac_octets(frame.kind));

    std::uint16_t fc = std::uint16_t(frame.kind) & 0x07;
    if (frame.ack_request) fc |= 1u << 3;
    if (frame.frame_pending) fc |= 1u << 4;
    put_u16(out, fc);
    out.push_back(frame.sequence);
    if (frame.kind != FrameKind::Ack) {
        put_u16(out, frame.dest);
        put_u16(out, frame.src);
    }
    if (frame.kind == FrameKind::MacCommand) out.push_back(frame.command_id);
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    put_u16(out, compute_fcs(out));
    return Status::Ok;
}

PhyFrame phy_encapsulate(std::vector<std::uint8_t> mac_octets) {
    PhyFrame phy;
    phy.phy_header = std::uint8_t(mac_octets.size());  // 7 bits used; max is 42
    phy.psdu = std::move(mac_octets);
    return phy;
}

std::vector<std::uint8_t> phy_serialize(const PhyFrame& phy) {
    std::vector<std::uint8_t> out;
    out.reserve(kPhyOverheadOctets + phy.psdu.size());
    out.insert(out.end(), phy.sync_header.begin(), phy.sync_header.end());
    out.push_back(phy.phy_header);
    out.insert(out.end(), phy.psdu.begin(), phy.psdu.end());
    return out;
}

Status phy_decapsulate(std::span<const std::uint8_t> octets, PhyFrame& out) {
    if (octets.size() < 11) return Status::LengthMismatch;  // shortest frame is an ack
    for (int i = 0; i < 4; ++i)
        if (octets[i] != 0x00) return Status::BadSfd;
    if (octets[4] != kSfd) return Status::BadSfd;
    if (octets[5] != octets.size() - kPhyOverheadOctets) return Status::LengthMismatch;
    std::copy_n(octets.begin(), out.sync_header.size(), out.sync_header.begin());
    out.phy_header = octets[5];
    out.psdu.assign(octets.begin() + kPhyOverheadOctets, octets.end());
    return Status::Ok;
}

Status encode_frame(const MacFrame& frame, std::vector<std::uint8_t>& out) {
    std::vector<std::uint8_t> mac;
    if (Status s = serialize_mac(frame, mac); s != Status::Ok) return s;
    out = phy_serialize(phy_encapsulate(std::move(mac)));
    return Status::Ok;
}

Status decode_frame(std::span<const std::uint8_t> octets, MacFrame& out) {
    PhyFrame phy;
    if (Status s = phy_decapsulate(octets, phy); s != Status::Ok) return s;

    auto mac = std::span<const std::uint8_t>(phy.psdu);
    auto body = mac.first(mac.size() - kFcsOctets);
    std::uint16_t fcs = get_u16(mac, mac.size() - kFcsOctets);
    if (compute_fcs(body) != fcs) return Status::FcsMismatch;

    std::uint16_t fc = get_u16(mac, 0);
    std::uint8_t type = fc & 0x07;
    if (type > std::uint8_t(FrameKind::MacCommand)) return Status::UnknownFrameType;

    MacFrame f;
    f.kind = FrameKind(type);
    f.ack_request = fc & (1u << 3);
    f.frame_pending = fc & (1u << 4);
    f.sequence = mac[2];
    if (mac.size() != mac_octets(f.kind)) return Status::LengthMismatch;
    std::size_t at = 3;
    if (f.kind != FrameKind::Ack) {
        f.dest = get_u16(mac, at);
        f.src = get_u16(mac, at + 2);
        at += 4;
    }
    if (f.kind == FrameKind::MacCommand) {
        f.command_id = mac[at++];
        if (f.command_id < kCmdAssociationRequest || f.command_id > kCmdDataRequest)
            return Status::UnknownFrameType;
    }
    f.payload.assign(mac.begin() + at, mac.begin() + (mac.size() - kFcsOctets));
    out = std::move(f);
    return Status::Ok;
}

std::vector<std::uint8_t> bits_from_octets(std::span<const std::uint8_t> octets) {
    std::vector<std::uint8_t> bits;
    bits.reserve(octets.size() * 8);
    for (std::uint8_t byte : octets)
        for (int i = 0; i < 8; ++i) bits.push_back((byte >> i) & 1u);
    return bits;
}

Status octets_from_bits(std::span<const std::uint8_t> bits, std::vector<std::uint8_t>& out) {
    if (bits.size() % 8 != 0) return Status::LengthMismatch;
    out.clear();
    out.reserve(bits.size() / 8);
    for (std::size_t i = 0; i < bits.size(); i += 8) {
        std::uint8_t byte = 0;
        for (int j = 0; j < 8; ++j)
            if (bits[i + j]) byte |= std::uint8_t(1u << j);
        out.push_back(byte);
    }
    return Status::Ok;
}

Status encode_frame_bits(const MacFrame& frame, std::vector<std::uint8_t>& out_bits) {
    std::vector<std::uint8_t> octets;
    if (Status s = encode_frame(frame, octets); s != Status::Ok) return s;
    out_bits = bits_from_octets(octets);
    return Status::Ok;
}

Status decode_frame_bits(std::span<const std::uint8_t> bits, MacFrame& out) {
    if (bits.size() < 88) return Status::LengthMismatch;
    std::vector<std::uint8_t> octets;
    if (Status s = octets_from_bits(bits, octets); s != Status::Ok) return s;
    return decode_frame(octets, out);
}

} // namespace nanomac::frames
