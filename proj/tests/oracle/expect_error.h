/*
 * Copyright 2026 The EduKG Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Assertion helper shared by the unit tests.
#ifndef EDUKG_TESTS_ORACLE_EXPECT_ERROR_H_
#define EDUKG_TESTS_ORACLE_EXPECT_ERROR_H_

#include <gtest/gtest.h>

#include "edukg/error.h"

// Runs `statement` and expects it to throw edukg::Error with `expected_code`.
#define EXPECT_ERROR_CODE(statement, expected_code)                \
  do {                                                             \
    try {                                                          \
      statement;                                                   \
      ADD_FAILURE() << "expected " << #expected_code << " from "   \
                    << #statement;                                 \
    } catch (const ::edukg::Error& e) {                            \
      EXPECT_EQ(e.code(), expected_code)                           \
          << ::edukg::ErrorCodeName(e.code()) << ": " << e.what(); \
    }                                                              \
  } while (false)

#endif  // EDUKG_TESTS_ORACLE_EXPECT_ERROR_H_
