// Copyright 2026 The msgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace msgate {

/// Failure categories raised by the library. The numeric values are part of
/// the C API (see msgate_status in msgate.h) and must stay in sync.
enum class ErrorCode {
    InvalidArgument = 1,
    NonConvergence = 2,
    IonEscape = 3,
    DegenerateSpacing = 4,
    ImaginaryMode = 5,
    OutOfRange = 6,
    BudgetExhausted = 7,
    DegeneratePair = 8,
    InsufficientPoints = 9,
    Io = 10,
    Parse = 11,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char *error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::IonEscape: return "IonEscape";
        case ErrorCode::DegenerateSpacing: return "DegenerateSpacing";
        case ErrorCode::ImaginaryMode: return "ImaginaryMode";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::BudgetExhausted: return "BudgetExhausted";
        case ErrorCode::DegeneratePair: return "DegeneratePair";
        case ErrorCode::InsufficientPoints: return "InsufficientPoints";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

inline void require(bool condition, const std::string &message) {
    if (!condition) {
        fail(ErrorCode::InvalidArgument, message);
    }
}

}  // namespace msgate
