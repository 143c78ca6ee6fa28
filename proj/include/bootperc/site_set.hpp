#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bootperc/lattice.hpp"

namespace bootperc {

// Dense membership bitmap over the sites of a shape, indexed by site_index.
class SiteSet {
public:
    SiteSet() = default;
    explicit SiteSet(const LatticeShape& shape);

    static SiteSet empty(const LatticeShape& shape) { return SiteSet(shape); }
    static SiteSet full(const LatticeShape& shape);
    static SiteSet from_indices(const LatticeShape& shape, const std::vector<std::size_t>& idx);
    static SiteSet from_sites(const LatticeShape& shape, const std::vector<Site>& sites);

    const LatticeShape& shape() const { return shape_; }
    std::size_t universe() const { return universe_; }

    bool contains(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool contains(const Site& x) const { return contains(site_index(x, shape_)); }
    void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void insert(const Site& x) { insert(site_index(x, shape_)); }
    void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void erase(const Site& x) { erase(site_index(x, shape_)); }

    std::size_t count() const;
    bool is_empty() const { return count() == 0; }
    bool is_full() const { return count() == universe_; }

    SiteSet complement() const;
    SiteSet& operator|=(const SiteSet& o);
    SiteSet& operator&=(const SiteSet& o);
    bool subset_of(const SiteSet& o) const;
    std::vector<std::size_t> indices() const;

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    bool operator==(const SiteSet&) const = default;

private:
    void clear_tail();

    LatticeShape shape_{};
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

SiteSet operator|(SiteSet a, const SiteSet& b);
SiteSet operator&(SiteSet a, const SiteSet& b);

// Text bitmap format:
//   bootperc-siteset v1
//   d <d> n <n> boundary <torus|open> order row-major-axis1-fastest bits lsb-first
//   <hex bytes, 64 chars per line>
// Byte k holds sites 8k..8k+7, site 8k in its least significant bit.
std::string to_hex(const SiteSet& s);
SiteSet from_hex(const std::string& text);

}  // namespace bootperc
