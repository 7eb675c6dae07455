#ifndef SCALEAUG_ERROR_HPP
#define SCALEAUG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace scaleaug {

// ---------------------------------------------------------------------------
// Exception taxonomy
//
// Every error thrown by this library derives from Error.  The subclasses map
// onto the process exit codes used by the CLI:
//   ValidationError / ParseError / DatasetError / IoError -> data error (2)
//   EvaluationError                                       -> evaluator error (3)
// ---------------------------------------------------------------------------

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// A domain value violates a type invariant (off-grid probability, negative
/// dimension, inconsistent search configuration, ...).
class ValidationError : public Error {
 public:
    using Error::Error;
};

/// A structured document (policy, stats, search config, annotations) does not
/// match its schema.  The message always names the offending field path.
class ParseError : public Error {
 public:
    using Error::Error;

    ParseError(const std::string& field_path, const std::string& what)
        : Error(field_path + ": " + what) {}
};

/// Filesystem or codec failure (unreadable file, undecodable image, ...).
class IoError : public Error {
 public:
    using Error::Error;
};

/// Annotation set is internally inconsistent (dangling image references,
/// degenerate boxes, ...).
class DatasetError : public Error {
 public:
    using Error::Error;
};

/// An external evaluator invocation failed (nonzero exit, timeout, malformed
/// stats output).  The search loop converts this into an infinite metric.
class EvaluationError : public Error {
 public:
    using Error::Error;
};

}  // namespace scaleaug

#endif  // SCALEAUG_ERROR_HPP
