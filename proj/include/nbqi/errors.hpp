#pragma once

#include <stdexcept>
#include <string>

namespace nbqi {

/// A numerical procedure failed for one coefficient functional.
class NumericalError : public std::runtime_error {
public:
    NumericalError(int index, const std::string& what)
        : std::runtime_error("index " + std::to_string(index) + ": " + what), index_(index)
    {
    }

    [[nodiscard]] int index() const noexcept { return index_; }

private:
    int index_;
};

} // namespace nbqi
