#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace agentctl::tools {

struct PdfLayout {
    std::size_t lines_per_page = 50;
    std::size_t wrap_column = 95;
    // FlateDecode the page content streams.
    bool compress = false;
};

// Input lines hard-wrapped at wrap_column; an empty text gives no lines.
std::vector<std::string> layout_lines(std::string_view text, std::size_t wrap_column);

// max(1, ceil(lines / lines_per_page)).
std::size_t page_count(std::string_view text, const PdfLayout& layout = {});

// Minimal single-font PDF 1.4 document with a correct xref table.
std::string render_text_pdf(std::string_view text, const PdfLayout& layout = {});

// Writes render_text_pdf to `path` and returns the page count. StoreError
// when the file cannot be written.
std::size_t text_to_pdf_tool(std::string_view text, const std::filesystem::path& path, const PdfLayout& layout = {});

}  // namespace agentctl::tools
