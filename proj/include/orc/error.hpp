#pragma once

#include <stdexcept>
#include <string>

namespace orc {

enum class ErrorCode {
    invalid_graph,      // out-of-range id, self-loop, malformed edge list
    config,             // parameter outside its admissible range
    isolated_node,      // random walk undefined
    disconnected,       // infinite graph distance between required nodes
    identical_nodes,    // curvature requested for x == y
    unbalanced,         // transport marginals do not carry equal mass
    io,                 // unreadable or unwritable file
    internal,           // broken internal invariant
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace orc
