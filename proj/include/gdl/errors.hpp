// Copyright 2026 The gdl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// errors.hpp - exception taxonomy shared by every module

#pragma once

#include <stdexcept>
#include <string>

namespace gdl {

// Two families: validation problems (bad input, exit code 2) and numeric
// contract failures (a computation could not meet its stated tolerance, exit 3).
enum class ErrorFamily { validation, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, std::string kind, const std::string& what)
        : std::runtime_error(what), family_(family), kind_(std::move(kind)) {}
    ErrorFamily family() const noexcept { return family_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    ErrorFamily family_;
    std::string kind_;
};

#define GDL_DEFINE_ERROR(Name, fam, tag)                                     \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(fam, tag, what) {}    \
    };

GDL_DEFINE_ERROR(StructuralError, ErrorFamily::validation, "structural")
GDL_DEFINE_ERROR(ParameterError, ErrorFamily::validation, "parameter")
GDL_DEFINE_ERROR(CapacityError, ErrorFamily::validation, "capacity")
GDL_DEFINE_ERROR(DomainError, ErrorFamily::validation, "domain")
GDL_DEFINE_ERROR(ConfigError, ErrorFamily::validation, "config")
GDL_DEFINE_ERROR(SingularityError, ErrorFamily::numeric, "singularity")
GDL_DEFINE_ERROR(ContractError, ErrorFamily::numeric, "contract")
GDL_DEFINE_ERROR(ResolutionError, ErrorFamily::numeric, "resolution")
GDL_DEFINE_ERROR(IntegrationError, ErrorFamily::numeric, "integration")
GDL_DEFINE_ERROR(NonPrimitiveError, ErrorFamily::numeric, "non_primitive")
GDL_DEFINE_ERROR(TimeoutError, ErrorFamily::numeric, "timeout")

#undef GDL_DEFINE_ERROR

} // namespace gdl
