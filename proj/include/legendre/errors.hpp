#pragma once

#include <stdexcept>
#include <string>

namespace legendre {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: exit status 1 at the command line.
class input_error : public error {
public:
    using error::error;
};

class degenerate_input_error : public input_error {
public:
    using input_error::input_error;
};

class path_error : public input_error {
public:
    using input_error::input_error;
};

class pole_error : public input_error {
public:
    using input_error::input_error;
};

class rank_error : public input_error {
public:
    using input_error::input_error;
};

// Not enough digits for the requested answer: exit status 2.
class precision_error : public error {
public:
    explicit precision_error(const std::string& what, int required_digits = 0)
        : error(what), required_digits_(required_digits) {}
    int required_digits() const noexcept { return required_digits_; }

private:
    int required_digits_;
};

class resource_error : public error {
public:
    using error::error;
};

} // namespace legendre
