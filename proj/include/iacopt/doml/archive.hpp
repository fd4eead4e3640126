#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

namespace iacopt::doml {

class ArchiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace zipdetail {

inline std::uint16_t read_u16(const std::string& buf, std::size_t pos) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(buf[pos]) |
                                      (static_cast<unsigned char>(buf[pos + 1]) << 8));
}

inline std::uint32_t read_u32(const std::string& buf, std::size_t pos) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + 3])) << 24);
}

struct ZipEntry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t crc = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t local_header_offset = 0;
    std::uint16_t flags = 0;
};

inline bool looks_like_zip(const std::string& bytes) {
    if (bytes.size() < 4 || bytes[0] != 'P' || bytes[1] != 'K') return false;
    return (bytes[2] == '\x03' && bytes[3] == '\x04') ||  // local file header
           (bytes[2] == '\x05' && bytes[3] == '\x06');    // empty archive
}

inline std::vector<ZipEntry> read_central_directory(const std::string& bytes) {
    constexpr std::uint32_t kEocdSig = 0x06054b50;
    constexpr std::uint32_t kCentralSig = 0x02014b50;
    if (bytes.size() < 22) throw ArchiveError("ZIP archive is truncated");

    // The end-of-central-directory record sits in the trailing 22..65557 bytes.
    std::size_t scan_start = bytes.size() >= 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
    std::size_t eocd = std::string::npos;
    for (std::size_t pos = bytes.size() - 22 + 1; pos-- > scan_start;) {
        if (read_u32(bytes, pos) == kEocdSig) {
            eocd = pos;
            break;
        }
    }
    if (eocd == std::string::npos)
        throw ArchiveError("ZIP end-of-central-directory record not found");

    std::uint16_t entry_count = read_u16(bytes, eocd + 10);
    std::uint32_t dir_offset = read_u32(bytes, eocd + 16);
    if (dir_offset > bytes.size()) throw ArchiveError("ZIP central directory offset out of range");

    std::vector<ZipEntry> entries;
    std::size_t pos = dir_offset;
    for (std::uint16_t i = 0; i < entry_count; ++i) {
        if (pos + 46 > bytes.size() || read_u32(bytes, pos) != kCentralSig)
            throw ArchiveError("ZIP central directory entry is corrupt");
        ZipEntry e;
        e.flags = read_u16(bytes, pos + 8);
        e.method = read_u16(bytes, pos + 10);
        e.crc = read_u32(bytes, pos + 16);
        e.compressed_size = read_u32(bytes, pos + 20);
        e.uncompressed_size = read_u32(bytes, pos + 24);
        std::uint16_t name_len = read_u16(bytes, pos + 28);
        std::uint16_t extra_len = read_u16(bytes, pos + 30);
        std::uint16_t comment_len = read_u16(bytes, pos + 32);
        e.local_header_offset = read_u32(bytes, pos + 42);
        if (pos + 46 + name_len > bytes.size())
            throw ArchiveError("ZIP entry name is out of range");
        e.name = bytes.substr(pos + 46, name_len);
        entries.push_back(std::move(e));
        pos += 46u + name_len + extra_len + comment_len;
    }
    return entries;
}

inline std::string inflate_raw(const char* data, std::size_t compressed_size,
                               std::size_t uncompressed_size) {
    std::string out(uncompressed_size, '\0');
    z_stream stream{};
    if (inflateInit2(&stream, -MAX_WBITS) != Z_OK)
        throw ArchiveError("zlib initialization failed");
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data));
    stream.avail_in = static_cast<uInt>(compressed_size);
    stream.next_out = reinterpret_cast<Bytef*>(out.data());
    stream.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&stream, Z_FINISH);
    inflateEnd(&stream);
    if (rc != Z_STREAM_END || stream.total_out != uncompressed_size)
        throw ArchiveError("ZIP entry failed to decompress");
    return out;
}

inline std::string extract_entry(const std::string& bytes, const ZipEntry& entry) {
    constexpr std::uint32_t kLocalSig = 0x04034b50;
    if (entry.flags & 0x0001) throw ArchiveError("encrypted ZIP entries are not supported");
    std::size_t lho = entry.local_header_offset;
    if (lho + 30 > bytes.size() || read_u32(bytes, lho) != kLocalSig)
        throw ArchiveError("ZIP local header is corrupt for entry '" + entry.name + "'");
    std::uint16_t name_len = read_u16(bytes, lho + 26);
    std::uint16_t extra_len = read_u16(bytes, lho + 28);
    std::size_t data_off = lho + 30 + name_len + extra_len;
    if (data_off + entry.compressed_size > bytes.size())
        throw ArchiveError("ZIP entry data is out of range for '" + entry.name + "'");

    std::string content;
    if (entry.method == 0) {
        content = bytes.substr(data_off, entry.compressed_size);
    } else if (entry.method == 8) {
        content = inflate_raw(bytes.data() + data_off, entry.compressed_size,
                              entry.uncompressed_size);
    } else {
        throw ArchiveError("unsupported ZIP compression method " +
                           std::to_string(entry.method));
    }

    std::uint32_t crc =
        static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(content.data()),
                                         static_cast<uInt>(content.size())));
    if (crc != entry.crc)
        throw ArchiveError("ZIP entry checksum mismatch for '" + entry.name + "'");
    return content;
}

inline bool has_doml_extension(const std::string& name) {
    if (name.size() < 5 || name.back() == '/') return false;
    std::string tail = name.substr(name.size() - 5);
    std::transform(tail.begin(), tail.end(), tail.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return tail == ".doml";
}

}  // namespace zipdetail

/// Extracts the DOML text from a ZIP archive holding exactly one `.doml`
/// entry.
inline std::string extract_doml_from_zip(const std::string& bytes) {
    auto entries = zipdetail::read_central_directory(bytes);
    std::vector<const zipdetail::ZipEntry*> doml_entries;
    for (const auto& e : entries)
        if (zipdetail::has_doml_extension(e.name)) doml_entries.push_back(&e);
    if (doml_entries.empty())
        throw ArchiveError("ZIP archive contains no .doml entry");
    if (doml_entries.size() > 1) {
        std::string names;
        for (const auto* e : doml_entries) names += " '" + e->name + "'";
        throw ArchiveError("ZIP archive contains multiple .doml entries:" + names);
    }
    return zipdetail::extract_entry(bytes, *doml_entries.front());
}

/// Reads the input model: ZIP archives must contain exactly one `.doml`
/// entry; anything else is returned as plain DOML text.
inline std::string read_input_archive(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArchiveError("cannot read input file: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (zipdetail::looks_like_zip(bytes)) return extract_doml_from_zip(bytes);
    return bytes;
}

}  // namespace iacopt::doml
