#ifndef CTOPT_ERRORS_HPP
#define CTOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ctopt {

// Bad configuration, scenario, or input file. The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Model evaluation failure at runtime. The CLI maps this to exit code 3.
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ctopt

#endif // CTOPT_ERRORS_HPP
