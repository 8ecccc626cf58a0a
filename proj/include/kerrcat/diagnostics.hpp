#pragma once
// Soft warnings (model used outside its small-parameter regime). They go to
// stderr unless a handler is installed; WarningCapture collects them for tests.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace kerrcat::diag {

using WarningHandler = std::function<void(std::string_view)>;

void warn(std::string_view message);
// Returns the previous handler. An empty handler restores stderr output.
WarningHandler set_warning_handler(WarningHandler handler);

class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace kerrcat::diag
