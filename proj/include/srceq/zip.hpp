// SPDX-License-Identifier: Apache-2.0
//
// Minimal zip reader: central directory walk plus stored/deflate entries.
// Source jars never need zip64 or encryption, so both are rejected.

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

namespace srceq {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArchiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading " + path.string());
    return data;
}

struct ZipEntry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t crc = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t size = 0;
    std::uint32_t local_header_offset = 0;

    bool is_directory() const { return !name.empty() && name.back() == '/'; }
};

class ZipReader {
public:
    explicit ZipReader(std::string data) : data_(std::move(data)) { read_central_directory(); }

    static ZipReader open(const std::filesystem::path& path) { return ZipReader(read_file(path)); }

    const std::vector<ZipEntry>& entries() const { return entries_; }

    std::string extract(const ZipEntry& e) const {
        std::size_t lh = e.local_header_offset;
        if (lh + 30 > data_.size() || u32(lh) != 0x04034b50) throw ArchiveError("bad local header for " + e.name);
        std::size_t start = lh + 30 + u16(lh + 26) + u16(lh + 28);
        if (start + e.compressed_size > data_.size()) throw ArchiveError("truncated entry " + e.name);
        std::string_view payload(data_.data() + start, e.compressed_size);
        std::string out;
        if (e.method == 0) {
            out.assign(payload);
        } else if (e.method == 8) {
            out = inflate_raw(payload, e.size, e.name);
        } else {
            throw ArchiveError("unsupported compression method " + std::to_string(e.method) + " for " + e.name);
        }
        if (out.size() != e.size) throw ArchiveError("size mismatch for " + e.name);
        auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size()));
        if (crc != e.crc) throw ArchiveError("crc mismatch for " + e.name);
        return out;
    }

private:
    std::uint16_t u16(std::size_t at) const {
        return static_cast<std::uint16_t>(static_cast<unsigned char>(data_[at]) |
                                          (static_cast<unsigned char>(data_[at + 1]) << 8));
    }
    std::uint32_t u32(std::size_t at) const {
        return static_cast<std::uint32_t>(u16(at)) | (static_cast<std::uint32_t>(u16(at + 2)) << 16);
    }

    void read_central_directory() {
        if (data_.size() < 22) throw ArchiveError("not a zip archive (too short)");
        // End-of-central-directory record; comment may push it up to 64 KiB back.
        std::size_t eocd = std::string::npos;
        std::size_t lowest = data_.size() > 22 + 0xFFFF ? data_.size() - 22 - 0xFFFF : 0;
        for (std::size_t i = data_.size() - 22 + 1; i-- > lowest;) {
            if (u32(i) == 0x06054b50) {
                eocd = i;
                break;
            }
        }
        if (eocd == std::string::npos) throw ArchiveError("end of central directory not found");
        std::uint16_t count = u16(eocd + 10);
        std::uint32_t cd_size = u32(eocd + 12);
        std::uint32_t cd_offset = u32(eocd + 16);
        if (count == 0xFFFF || cd_offset == 0xFFFFFFFF) throw ArchiveError("zip64 archives are not supported");
        if (static_cast<std::size_t>(cd_offset) + cd_size > eocd) throw ArchiveError("corrupt central directory bounds");

        std::size_t p = cd_offset;
        for (std::uint16_t n = 0; n < count; ++n) {
            if (p + 46 > eocd || u32(p) != 0x02014b50) throw ArchiveError("corrupt central directory entry");
            ZipEntry e;
            std::uint16_t flags = u16(p + 8);
            if (flags & 0x1) throw ArchiveError("encrypted entries are not supported");
            e.method = u16(p + 10);
            e.crc = u32(p + 16);
            e.compressed_size = u32(p + 20);
            e.size = u32(p + 24);
            std::uint16_t name_len = u16(p + 28);
            std::uint16_t extra_len = u16(p + 30);
            std::uint16_t comment_len = u16(p + 32);
            e.local_header_offset = u32(p + 42);
            if (p + 46 + name_len > eocd) throw ArchiveError("corrupt central directory entry name");
            e.name.assign(data_.data() + p + 46, name_len);
            entries_.push_back(std::move(e));
            p += 46 + name_len + extra_len + comment_len;
        }
    }

    static std::string inflate_raw(std::string_view in, std::size_t expected, const std::string& name) {
        z_stream zs{};
        if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw ArchiveError("inflate init failed");
        std::string out(expected + 1, '\0');
        zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
        zs.avail_in = static_cast<uInt>(in.size());
        zs.next_out = reinterpret_cast<Bytef*>(out.data());
        zs.avail_out = static_cast<uInt>(out.size());
        int rc = inflate(&zs, Z_FINISH);
        std::size_t produced = zs.total_out;
        inflateEnd(&zs);
        if (rc != Z_STREAM_END) throw ArchiveError("corrupt deflate data in " + name);
        out.resize(produced);
        return out;
    }

    std::string data_;
    std::vector<ZipEntry> entries_;
};

} // namespace srceq
