// Copyright 2026 The dccot Authors
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

#include "dccot/subprocess.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>

#include "dccot/error.hpp"

namespace dccot {

namespace {

// Removes the temp file on scope exit.
class TempFile {
 public:
  explicit TempFile(std::string_view contents) {
    const auto dir = std::filesystem::temp_directory_path() / "dccot-XXXXXX";
    path_ = dir.string();
    const int fd = ::mkstemp(path_.data());
    if (fd < 0) throw Error("cannot create temporary file for subprocess input");
    std::size_t written = 0;
    while (written < contents.size()) {
      const auto n = ::write(fd, contents.data() + written, contents.size() - written);
      if (n <= 0) {
        ::close(fd);
        ::unlink(path_.c_str());
        throw Error("cannot write subprocess input");
      }
      written += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() { ::unlink(path_.c_str()); }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

}  // namespace

std::string run_command(const std::string& command, std::string_view input) {
  TempFile in(input);
  const std::string full = "(" + command + ") < " + shell_quote(in.path());
  FILE* pipe = ::popen(full.c_str(), "r");
  if (pipe == nullptr) throw Error("cannot start command: " + command);

  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);

  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error("command failed (status " + std::to_string(status) + "): " + command);
  }
  return out;
}

}  // namespace dccot
