#pragma once
// SHA-256 (FIPS 180-4) for manifest content digests.

#include <cstdint>
#include <string>
#include <string_view>

namespace taxgraph {

class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    void update(const void* data, std::size_t size);
    // Hex digest, lowercase. Finalizes; call reset() to reuse.
    std::string hex_digest();

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint64_t bit_length_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffered_ = 0;
};

std::string sha256_hex(std::string_view data);

}  // namespace taxgraph
