#include "fsi/error.hpp"

namespace fsi {

std::string_view errc_name(Errc code)
{
    switch (code) {
    case Errc::MalformedAddress: return "MalformedAddress";
    case Errc::LeftSiblingMissing: return "LeftSiblingMissing";
    case Errc::NotPrefixClosed: return "NotPrefixClosed";
    case Errc::RootNotInTree: return "RootNotInTree";
    case Errc::InvalidZone: return "InvalidZone";
    case Errc::TreeTooLarge: return "TreeTooLarge";
    case Errc::SubtreeTooLarge: return "SubtreeTooLarge";
    case Errc::TheoryMismatch: return "TheoryMismatch";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::UnknownTrack: return "UnknownTrack";
    case Errc::TrackMismatch: return "TrackMismatch";
    case Errc::TooManyTracks: return "TooManyTracks";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::SortError: return "SortError";
    case Errc::UnknownAtom: return "UnknownAtom";
    case Errc::AssignmentOutOfDomain: return "AssignmentOutOfDomain";
    case Errc::CompileError: return "CompileError";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::NotDelta1: return "NotDelta1";
    case Errc::BoundedCongruenceCheckFailed: return "BoundedCongruenceCheckFailed";
    case Errc::NotPurelyBinary: return "NotPurelyBinary";
    case Errc::NotSparse: return "NotSparse";
    case Errc::TooManyCars: return "TooManyCars";
    case Errc::IncompatibleFlow: return "IncompatibleFlow";
    case Errc::NotALattice: return "NotALattice";
    case Errc::NotAnAtom: return "NotAnAtom";
    case Errc::TooManyAtoms: return "TooManyAtoms";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code)
{
}

void fail(Errc code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace fsi
