#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace xicor {

// Domain error with a stable machine-readable name (e.g. "AllYEqual",
// "MassNotOne"). The CLI prints the name on stderr and maps it to exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(std::string name, const std::string& what) {
    throw Error(std::move(name), what);
}

}  // namespace xicor
