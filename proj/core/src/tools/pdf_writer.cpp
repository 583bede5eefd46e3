#include "agentctl/tools/pdf_writer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <zlib.h>

#include "agentctl/error.hpp"

namespace agentctl::tools {

namespace {

std::string escape(std::string_view line) {
    std::string out;
    for (char c : line) {
        const auto u = static_cast<unsigned char>(c);
        if (c == '(' || c == ')' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\t') {
            out += ' ';
        } else if (u < 0x20 || u > 0x7e) {
            out += '?';
        } else {
            out += c;
        }
    }
    return out;
}

std::string deflate_bytes(const std::string& in) {
    uLongf size = compressBound(static_cast<uLong>(in.size()));
    std::string out(size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(out.data()), &size, reinterpret_cast<const Bytef*>(in.data()),
                  static_cast<uLong>(in.size()), Z_BEST_COMPRESSION) != Z_OK) {
        throw Error(ErrorCode::StoreError, "deflate failed while rendering PDF");
    }
    out.resize(size);
    return out;
}

}  // namespace

std::vector<std::string> layout_lines(std::string_view text, std::size_t wrap_column) {
    std::vector<std::string> lines;
    if (text.empty()) return lines;
    if (wrap_column == 0) wrap_column = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) lines.emplace_back();
        for (std::size_t i = 0; i < line.size(); i += wrap_column) lines.emplace_back(line.substr(i, wrap_column));
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

std::size_t page_count(std::string_view text, const PdfLayout& layout) {
    const std::size_t n = layout_lines(text, layout.wrap_column).size();
    const std::size_t per = std::max<std::size_t>(layout.lines_per_page, 1);
    return std::max<std::size_t>(1, (n + per - 1) / per);
}

std::string render_text_pdf(std::string_view text, const PdfLayout& layout) {
    const auto lines = layout_lines(text, layout.wrap_column);
    const std::size_t per = std::max<std::size_t>(layout.lines_per_page, 1);
    const std::size_t pages = std::max<std::size_t>(1, (lines.size() + per - 1) / per);

    std::string out = "%PDF-1.4\n%\xE2\xE3\xCF\xD3\n";
    std::vector<std::size_t> offsets;
    auto object = [&](const std::string& body) {
        offsets.push_back(out.size());
        out += std::to_string(offsets.size()) + " 0 obj\n" + body + "\nendobj\n";
    };

    std::string kids;
    for (std::size_t p = 0; p < pages; ++p) kids += (p ? " " : "") + std::to_string(4 + 2 * p) + " 0 R";
    object("<< /Type /Catalog /Pages 2 0 R >>");
    object("<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages) + " >>");
    object("<< /Type /Font /Subtype /Type1 /BaseFont /Courier >>");

    for (std::size_t p = 0; p < pages; ++p) {
        object("<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources << /Font << /F1 3 0 R >> >> /Contents " +
               std::to_string(5 + 2 * p) + " 0 R >>");
        std::string content = "BT\n/F1 9 Tf\n12 TL\n50 750 Td\n";
        const std::size_t first = p * per;
        const std::size_t last = std::min(lines.size(), first + per);
        for (std::size_t i = first; i < last; ++i) {
            if (i > first) content += "T*\n";
            content += "(" + escape(lines[i]) + ") Tj\n";
        }
        content += "ET\n";
        if (layout.compress) {
            const std::string z = deflate_bytes(content);
            object("<< /Length " + std::to_string(z.size()) + " /Filter /FlateDecode >>\nstream\n" + z + "\nendstream");
        } else {
            object("<< /Length " + std::to_string(content.size()) + " >>\nstream\n" + content + "endstream");
        }
    }

    const std::size_t xref = out.size();
    out += "xref\n0 " + std::to_string(offsets.size() + 1) + "\n0000000000 65535 f \n";
    for (std::size_t off : offsets) {
        char entry[32];
        std::snprintf(entry, sizeof entry, "%010zu 00000 n \n", off);
        out += entry;
    }
    out += "trailer\n<< /Size " + std::to_string(offsets.size() + 1) + " /Root 1 0 R >>\nstartxref\n" +
           std::to_string(xref) + "\n%%EOF\n";
    return out;
}

std::size_t text_to_pdf_tool(std::string_view text, const std::filesystem::path& path, const PdfLayout& layout) {
    const std::string bytes = render_text_pdf(text, layout);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StoreError, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::StoreError, "write failed for " + path.string());
    return page_count(text, layout);
}

}  // namespace agentctl::tools
