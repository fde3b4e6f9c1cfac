#pragma once

#include <string_view>

namespace relcpd {

/// Project version plus `git describe` at configure time, when available.
std::string_view version_string() noexcept;

} // namespace relcpd
