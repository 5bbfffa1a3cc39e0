// Copyright 2026 The ACD Gateway Authors
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

// Reader for process description files.
//
//   file    := form*
//   form    := (domain NAME "value"*)
//            | (define (NAME param*) term)
//   term    := STOP | SKIP
//            | (prefix event [effect] term)
//            | (choice term+)
//            | (if guard term term)
//            | (call NAME expr*)
//            | (parallel term term (sync NAME*))
//   event   := (event NAME field*)
//   field   := (? var DOMAIN) | expr
//   effect  := (effect NAME expr*)
//   guard   := (and guard+) | (or guard+) | (not guard) | (eq expr expr)
//            | (PREDICATE expr*)
//   expr    := var | "literal" | (FUNCTION expr*)
//
// `;` starts a comment running to end of line. String literals support the
// escapes \" and \\ only.

#ifndef ACD_MODEL_PARSER_HPP
#define ACD_MODEL_PARSER_HPP

#include "acd/model/interpreter.hpp"

#include <filesystem>
#include <string_view>

namespace acd::model {

/// Definitions and domains only; predicates, functions and effects are bound
/// by the caller before validate(). Throws SpecificationError with a line
/// number on syntax errors.
ProcessEnvironment parse_processes(std::string_view text);
ProcessEnvironment parse_process_file(const std::filesystem::path& path);

/// Parses a single term, e.g. for ad-hoc client processes in tests.
TermPtr parse_term(std::string_view text);

}  // namespace acd::model

#endif  // ACD_MODEL_PARSER_HPP
