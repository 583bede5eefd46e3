// Renders a text file into a PDF with the agentctl writer.
#include <fstream>
#include <iostream>
#include <sstream>

#include "agentctl/tools/pdf_writer.hpp"

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: agentctl-mkpdf <in.txt> <out.pdf>\n";
        return 2;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "cannot read " << argv[1] << "\n";
        return 1;
    }
    std::ostringstream os;
    os << in.rdbuf();
    agentctl::tools::PdfLayout layout;
    layout.compress = true;
    try {
        std::cout << agentctl::tools::text_to_pdf_tool(os.str(), argv[2], layout) << " page(s)\n";
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
