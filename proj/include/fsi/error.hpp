#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsi {

enum class Errc {
    MalformedAddress,
    LeftSiblingMissing,
    NotPrefixClosed,
    RootNotInTree,
    InvalidZone,
    TreeTooLarge,
    SubtreeTooLarge,
    TheoryMismatch,
    KindMismatch,
    UnknownTrack,
    TrackMismatch,
    TooManyTracks,
    SyntaxError,
    SortError,
    UnknownAtom,
    AssignmentOutOfDomain,
    CompileError,
    SignatureMismatch,
    NotDelta1,
    BoundedCongruenceCheckFailed,
    NotPurelyBinary,
    NotSparse,
    TooManyCars,
    IncompatibleFlow,
    NotALattice,
    NotAnAtom,
    TooManyAtoms,
    InvalidInput,
    Internal,
};

std::string_view errc_name(Errc code);

/// Every failure raised by the library. `code()` identifies the failure
/// class; `what()` carries a human-readable diagnostic.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

} // namespace fsi
