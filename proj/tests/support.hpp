#pragma once

#include <filesystem>
#include <string>

#include <doctest.h>

#include "armpose/error.hpp"

namespace test_support {

// Scratch directory under the build tree, emptied on creation.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(ARMPOSE_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

template <class F>
armpose::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const armpose::Error& e) {
    return e.kind();
  }
  FAIL("expected an armpose::Error");
  return armpose::ErrorKind::Io;
}

}  // namespace test_support
