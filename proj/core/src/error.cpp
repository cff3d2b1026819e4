// Copyright 2026 The qahsim Authors
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

#include "qahsim/error.hpp"

namespace qahsim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GapClosed: return "GapClosed";
    case ErrorKind::EmptyBis: return "EmptyBis";
    case ErrorKind::InvalidTau: return "InvalidTau";
    case ErrorKind::Defective: return "Defective";
    case ErrorKind::FitDiverged: return "FitDiverged";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::OpenContour: return "OpenContour";
    case ErrorKind::NoDbis: return "NoDbis";
    case ErrorKind::DegenerateField: return "DegenerateField";
    case ErrorKind::Masked: return "Masked";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::SingularOnLoop: return "SingularOnLoop";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace qahsim
