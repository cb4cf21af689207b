#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "dsy/errors.hpp"
#include "dsy/rng.hpp"

namespace dsy {

/// A finite word over {1,2} addressing a node of the binary tree. The empty
/// word is the root. Stored as fixed-width packed bits (bit j-1 set means the
/// j-th symbol is 2) with an explicit length.
class vertex {
public:
    static constexpr std::size_t max_generation = 1024;

    vertex() = default;

    static vertex root() { return {}; }

    /// Parses "θ", "" or a string of '1'/'2' characters.
    static vertex parse(std::string_view word) {
        vertex v;
        if (word == "θ" || word == "root") return v;
        for (char c : word) {
            require(c == '1' || c == '2', "vertex word must contain only '1' and '2'");
            v = v.child(c - '0');
        }
        return v;
    }

    std::size_t generation() const noexcept { return length_; }
    std::size_t size() const noexcept { return length_; }
    bool is_root() const noexcept { return length_ == 0; }

    /// Symbol at 1-based position j (1 <= j <= generation()).
    int symbol(std::size_t j) const {
        require(j >= 1 && j <= length_, "vertex symbol index out of range");
        const std::size_t bit = j - 1;
        return ((bits_[bit / 64] >> (bit % 64)) & 1u) ? 2 : 1;
    }

    vertex child(int s) const {
        require(s == 1 || s == 2, "child symbol must be 1 or 2");
        require(length_ < max_generation, "vertex generation cap exceeded");
        vertex v = *this;
        if (s == 2) v.bits_[length_ / 64] |= std::uint64_t{1} << (length_ % 64);
        ++v.length_;
        return v;
    }

    /// Truncation v|j; prefix(0) is the root.
    vertex prefix(std::size_t j) const {
        require(j <= length_, "prefix length exceeds vertex generation");
        vertex v;
        v.length_ = static_cast<std::uint16_t>(j);
        for (std::size_t w = 0; w < words; ++w) {
            const std::size_t lo = w * 64;
            if (lo >= j) break;
            const std::size_t keep = j - lo;
            v.bits_[w] = keep >= 64 ? bits_[w] : bits_[w] & ((std::uint64_t{1} << keep) - 1);
        }
        return v;
    }

    vertex parent() const {
        require(length_ > 0, "root has no parent");
        return prefix(length_ - 1);
    }

    /// True if this is a (not necessarily proper) prefix of `other`.
    bool is_prefix_of(const vertex& other) const noexcept {
        if (length_ > other.length_) return false;
        return other.prefix(length_) == *this;
    }

    friend vertex concat(const vertex& u, const vertex& v) {
        require(u.length_ + v.length_ <= max_generation, "vertex generation cap exceeded");
        vertex w = u;
        for (std::size_t j = 1; j <= v.length_; ++j) w = w.child(v.symbol(j));
        return w;
    }

    /// Stream key of this vertex, identical to folding rng::child_key from
    /// the root along the word.
    std::uint64_t key() const noexcept {
        std::uint64_t k = rng::root_key;
        for (std::size_t j = 0; j < length_; ++j) {
            const int s = ((bits_[j / 64] >> (j % 64)) & 1u) ? 2 : 1;
            k = rng::child_key(k, s);
        }
        return k;
    }

    std::string to_string() const {
        if (length_ == 0) return "θ";
        std::string s;
        s.reserve(length_);
        for (std::size_t j = 1; j <= length_; ++j) s.push_back(symbol(j) == 1 ? '1' : '2');
        return s;
    }

    friend bool operator==(const vertex&, const vertex&) = default;

    /// Shortlex order: by generation, then lexicographically.
    friend std::strong_ordering operator<=>(const vertex& a, const vertex& b) noexcept {
        if (auto c = a.length_ <=> b.length_; c != 0) return c;
        for (std::size_t j = 0; j < a.length_; ++j) {
            const auto x = (a.bits_[j / 64] >> (j % 64)) & 1u;
            const auto y = (b.bits_[j / 64] >> (j % 64)) & 1u;
            if (x != y) return x <=> y;
        }
        return std::strong_ordering::equal;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = rng::mix64(length_);
        for (std::size_t w = 0; w * 64 < length_; ++w) h = rng::mix64(h ^ bits_[w]);
        return static_cast<std::size_t>(h);
    }

private:
    static constexpr std::size_t words = max_generation / 64;
    std::array<std::uint64_t, words> bits_{};
    std::uint16_t length_ = 0;
};

}  // namespace dsy

template <>
struct std::hash<dsy::vertex> {
    std::size_t operator()(const dsy::vertex& v) const noexcept { return v.hash(); }
};
