/*
   Copyright 2026 The phasecool Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace phasecool {

enum class ErrorKind {
    invalid_parameter,
    boundary,
    wrong_picture,
    integration_diverged,
    non_physical_state,
    invalid_kind,
    use_shannon,
    unknown_preset,
    incompatible_bundles,
    config,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid parameter";
    case ErrorKind::boundary: return "boundary violation";
    case ErrorKind::wrong_picture: return "wrong picture";
    case ErrorKind::integration_diverged: return "integration diverged";
    case ErrorKind::non_physical_state: return "non-physical state";
    case ErrorKind::invalid_kind: return "invalid field kind";
    case ErrorKind::use_shannon: return "use shannon";
    case ErrorKind::unknown_preset: return "unknown preset";
    case ErrorKind::incompatible_bundles: return "incompatible bundles";
    case ErrorKind::config: return "config error";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

}  // namespace phasecool
