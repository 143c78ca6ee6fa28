#include "bootperc/site_set.hpp"

#include <sstream>

#include "bootperc/error.hpp"

namespace bootperc {

SiteSet::SiteSet(const LatticeShape& shape)
    : shape_(shape), universe_(shape.volume()), words_((universe_ + 63) / 64, 0) {}

SiteSet SiteSet::full(const LatticeShape& shape) {
    SiteSet s(shape);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.clear_tail();
    return s;
}

SiteSet SiteSet::from_indices(const LatticeShape& shape, const std::vector<std::size_t>& idx) {
    SiteSet s(shape);
    for (auto i : idx) {
        if (i >= s.universe_) throw InputError("site index out of range");
        s.insert(i);
    }
    return s;
}

SiteSet SiteSet::from_sites(const LatticeShape& shape, const std::vector<Site>& sites) {
    SiteSet s(shape);
    for (const auto& x : sites) s.insert(site_index(x, shape));
    return s;
}

void SiteSet::clear_tail() {
    const std::size_t rem = universe_ & 63;
    if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

std::size_t SiteSet::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

SiteSet SiteSet::complement() const {
    SiteSet s = *this;
    for (auto& w : s.words_) w = ~w;
    s.clear_tail();
    return s;
}

SiteSet& SiteSet::operator|=(const SiteSet& o) {
    if (!(shape_ == o.shape_)) throw InputError("site set shape mismatch");
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
}

SiteSet& SiteSet::operator&=(const SiteSet& o) {
    if (!(shape_ == o.shape_)) throw InputError("site set shape mismatch");
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
}

bool SiteSet::subset_of(const SiteSet& o) const {
    if (!(shape_ == o.shape_)) throw InputError("site set shape mismatch");
    for (std::size_t k = 0; k < words_.size(); ++k)
        if (words_[k] & ~o.words_[k]) return false;
    return true;
}

std::vector<std::size_t> SiteSet::indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t k = 0; k < words_.size(); ++k) {
        std::uint64_t w = words_[k];
        while (w) {
            out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

SiteSet operator|(SiteSet a, const SiteSet& b) { return a |= b; }
SiteSet operator&(SiteSet a, const SiteSet& b) { return a &= b; }

std::string to_hex(const SiteSet& s) {
    static constexpr char kDigits[] = "0123456789abcdef";
    const auto& shape = s.shape();
    std::ostringstream out;
    out << "bootperc-siteset v1\n"
        << "d " << shape.d << " n " << shape.n << " boundary " << to_string(shape.boundary)
        << " order row-major-axis1-fastest bits lsb-first\n";
    const std::size_t bytes = (s.universe() + 7) / 8;
    for (std::size_t b = 0; b < bytes; ++b) {
        const auto byte = static_cast<unsigned>((s.words()[b / 8] >> (8 * (b % 8))) & 0xffu);
        out << kDigits[byte >> 4] << kDigits[byte & 15];
        if (b % 32 == 31 || b + 1 == bytes) out << '\n';
    }
    return out.str();
}

SiteSet from_hex(const std::string& text) {
    std::istringstream in(text);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "bootperc-siteset" || version != "v1") throw InputError("not a site set bitmap");
    std::string kd, kn, kb, ko, order, kbits, bits, boundary;
    int d = 0, n = 0;
    in >> kd >> d >> kn >> n >> kb >> boundary >> ko >> order >> kbits >> bits;
    if (kd != "d" || kn != "n" || kb != "boundary" || ko != "order" ||
        order != "row-major-axis1-fastest" || kbits != "bits" || bits != "lsb-first")
        throw InputError("malformed site set header");
    SiteSet s(LatticeShape::make(d, n, parse_boundary(boundary)));
    std::string hex, line;
    while (in >> line) hex += line;
    const std::size_t bytes = (s.universe() + 7) / 8;
    if (hex.size() != 2 * bytes) throw InputError("site set payload has wrong length");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
        throw InputError("bad hex digit in site set payload");
    };
    for (std::size_t b = 0; b < bytes; ++b) {
        const std::uint64_t byte = (nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]);
        s.words()[b / 8] |= byte << (8 * (b % 8));
    }
    const std::size_t rem = s.universe() & 63;
    if (rem != 0 && (s.words().back() >> rem) != 0) throw InputError("site set payload sets bits past the lattice");
    return s;
}

}  // namespace bootperc
