#ifndef NANOMAC_CORE_STATUS_HPP
#define NANOMAC_CORE_STATUS_HPP

namespace nanomac {

// Outcome codes shared by the whole library. Values are stable: the C API
// exposes them verbatim.
enum class Status : int {
    Ok = 0,
    InvalidArgument = 1,
    InvalidPayloadLength = 2,
    BadSfd = 3,
    LengthMismatch = 4,
    FcsMismatch = 5,
    UnknownFrameType = 6,
    InsufficientEnergy = 7,
    TableFull = 8,
    NotMember = 9,
    ContentionLost = 10,
    PastEvent = 11,
    IoError = 12,
    Overflow = 13,
};

constexpr const char* status_name(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::InvalidArgument: return "invalid argument";
        case Status::InvalidPayloadLength: return "invalid payload length";
        case Status::BadSfd: return "sync header mismatch";
        case Status::LengthMismatch: return "length mismatch";
        case Status::FcsMismatch: return "frame check sequence mismatch";
        case Status::UnknownFrameType: return "unknown frame type";
        case Status::InsufficientEnergy: return "insufficient energy";
        case Status::TableFull: return "address table full";
        case Status::NotMember: return "not a member";
        case Status::ContentionLost: return "contention lost";
        case Status::PastEvent: return "event scheduled in the past";
        case Status::IoError: return "i/o error";
        case Status::Overflow: return "arithmetic overflow";
    }
    return "unknown status";
}

} // namespace nanomac

#endif
