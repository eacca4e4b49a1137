#include "twtsim/format.hpp"

#include <array>
#include <charconv>

namespace twtsim {

std::string fmt_real(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf.data(), end);
}

}  // namespace twtsim
