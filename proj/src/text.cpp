#include "plantnav/text.hpp"

#include <charconv>
#include <stdexcept>

namespace plantnav {

std::string format_double(double v) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

}  // namespace plantnav
