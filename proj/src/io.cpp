#include "pdakit/io.hpp"

#include <fstream>
#include <sstream>

#include "pdakit/validate.hpp"

namespace pdakit {

std::string write_array(const PdaArray& p) {
    check_well_formed(p);
    int z0 = 0;
    for (int f = 0; f < p.F; ++f)
        if (p.is_star(f, 0)) ++z0;
    std::ostringstream os;
    os << "MIMOPDA 1\n";
    os << "G " << p.G << " L " << p.L << " K " << p.K << " F " << p.F << " Z "
       << z0 << " S " << p.S << "\n";
    for (int f = 0; f < p.F; ++f) {
        for (int k = 0; k < p.K; ++k) {
            if (k) os << ' ';
            if (p.is_star(f, k))
                os << '*';
            else
                os << p.at(f, k);
        }
        os << '\n';
    }
    return os.str();
}

void write_array_file(const PdaArray& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
    out << write_array(p);
    if (!out) fail(ErrorKind::IoError, "write failed: " + path);
}

namespace {

bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        return true;
    }
    return false;
}

int parse_int(const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::ParseError, std::string("expected integer for ") + what +
                                        ", got '" + tok + "'");
    }
}

}  // namespace

PdaArray read_array(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) fail(ErrorKind::ParseError, "empty input");
    {
        std::istringstream ls(line);
        std::string magic, ver;
        ls >> magic >> ver;
        if (magic != "MIMOPDA" || ver != "1")
            fail(ErrorKind::ParseError, "bad header line: '" + line + "'");
    }
    if (!next_content_line(in, line))
        fail(ErrorKind::ParseError, "missing parameter line");
    int G = 0, L = 0, K = 0, F = 0, Z = 0, S = 0;
    {
        std::istringstream ls(line);
        std::string key, val;
        bool got[6] = {};
        while (ls >> key >> val) {
            int v = parse_int(val, key.c_str());
            if (key == "G") G = v, got[0] = true;
            else if (key == "L") L = v, got[1] = true;
            else if (key == "K") K = v, got[2] = true;
            else if (key == "F") F = v, got[3] = true;
            else if (key == "Z") Z = v, got[4] = true;
            else if (key == "S") S = v, got[5] = true;
            else fail(ErrorKind::ParseError, "unknown parameter key '" + key + "'");
        }
        for (bool g : got)
            if (!g) fail(ErrorKind::ParseError, "parameter line must set G L K F Z S");
    }
    if (G < 1 || L < 1 || K < 1 || F < 1 || S < 0 || Z < 0 || Z > F)
        fail(ErrorKind::ParseError, "parameter values out of range");
    PdaArray p = make_array(G, L, F, K, S);
    for (int f = 0; f < F; ++f) {
        if (!next_content_line(in, line))
            fail(ErrorKind::ParseError, "expected " + std::to_string(F) +
                                            " rows, got " + std::to_string(f));
        std::istringstream ls(line);
        std::string tok;
        for (int k = 0; k < K; ++k) {
            if (!(ls >> tok))
                fail(ErrorKind::ParseError,
                     "row " + std::to_string(f) + " has fewer than " +
                         std::to_string(K) + " entries");
            if (tok == "*") {
                p.at(f, k) = kStar;
            } else {
                int v = parse_int(tok, "entry");
                if (v < 1 || v > S)
                    fail(ErrorKind::ParseError,
                         "entry " + tok + " outside [1.." + std::to_string(S) + "]");
                p.at(f, k) = v;
            }
        }
        std::string extra;
        if (ls >> extra)
            fail(ErrorKind::ParseError, "row " + std::to_string(f) + " has more than " +
                                            std::to_string(K) + " entries");
    }
    if (next_content_line(in, line))
        fail(ErrorKind::ParseError, "trailing content after " + std::to_string(F) + " rows");
    return p;
}

PdaArray read_array_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path);
    return read_array(in);
}

}  // namespace pdakit
