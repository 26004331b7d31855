#pragma once
#include <stdexcept>
#include <string>

namespace serex {

// Failure taxonomy. spec_error covers malformed specifications and bad
// arguments (CLI exit status 2). check_error covers certificate and
// invariant violations detected by exact arithmetic; the message carries
// the violating exact value (CLI exit status 3).

class spec_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class check_error : public std::runtime_error {
 public:
  check_error(const std::string& kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(kind) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define SEREX_ERROR_KIND(name, tag)                       \
  struct name : check_error {                             \
    explicit name(const std::string& w)                   \
        : check_error(tag, w) {}                          \
  }

SEREX_ERROR_KIND(certificate_violation, "certificate-violation");
SEREX_ERROR_KIND(injectivity_violation, "injectivity-violation");
SEREX_ERROR_KIND(separation_violation, "separation-violation");
SEREX_ERROR_KIND(modulus_violation, "modulus-violation");
SEREX_ERROR_KIND(pseudoboundedness_violation, "pseudoboundedness-violation");
SEREX_ERROR_KIND(tail_violation, "tail-violation");
SEREX_ERROR_KIND(membership_violation, "membership-violation");
SEREX_ERROR_KIND(invariant_violation, "invariant-violation");

#undef SEREX_ERROR_KIND

}  // namespace serex
