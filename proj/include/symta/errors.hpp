#ifndef SYMTA_ERRORS_HPP
#define SYMTA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace symta {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed textual input (s-expressions, tree syntax, file headers).
class parse_error : public error {
public:
  explicit parse_error(const std::string& msg) : error("parse error: " + msg) {}
};

/// Structural violation in an automaton/grammar/transducer description.
class format_error : public error {
public:
  explicit format_error(const std::string& msg) : error("format error: " + msg) {}
};

/// Two objects built over incompatible theories were combined.
class type_error : public error {
public:
  explicit type_error(const std::string& msg) : error("type error: " + msg) {}
};

/// A label does not belong to the universe it is used in.
class domain_error : public error {
public:
  explicit domain_error(const std::string& msg) : error("domain error: " + msg) {}
};

/// A tree exceeds the rank bound k of the consumer.
class bound_error : public error {
public:
  explicit bound_error(const std::string& msg) : error("bound error: " + msg) {}
};

/// A position is not valid for the tree it is applied to.
class position_error : public error {
public:
  explicit position_error(const std::string& msg) : error("position error: " + msg) {}
};

/// Substitution with unbound variables or mismatched arity.
class arity_error : public error {
public:
  explicit arity_error(const std::string& msg) : error("arity error: " + msg) {}
};

/// Operation requires a capability the theory or object does not have
/// (image on a theory without it, forward application of a non-simple
/// transducer, alphabetic bridge on a non-alphabetic transducer).
class capability_error : public error {
public:
  explicit capability_error(const std::string& msg) : error("capability error: " + msg) {}
};

/// A partial function was applied outside its domain inside an applicable
/// transducer rule.
class partial_fn_error : public error {
public:
  explicit partial_fn_error(const std::string& msg) : error("partial function error: " + msg) {}
};

} // namespace symta

#endif
