#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdfa {

// Tags are positive integers 1..N. In tag sequences a negative value -t
// records that tag t was bypassed. Tag 0 is the rightmost-position
// pseudo-tag used by the fixed-tags analysis and never reaches automata.
using Tag = int;
using TagSeq = std::vector<Tag>;
inline constexpr Tag kRightmostTag = 0;

// Input offsets count consumed bytes. kNil marks an absent value.
using Offset = std::int64_t;
inline constexpr Offset kNil = -1;

using TagValues = std::vector<Offset>;            // index t-1
using TagLists = std::vector<std::vector<Offset>>; // index t-1

using Reg = std::int32_t;

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Raised when determinization exceeds the configured state cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tdfa
