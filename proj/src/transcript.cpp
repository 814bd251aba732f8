#include "secmeans/transcript.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace secmeans {

namespace fs = std::filesystem;

std::string rational_to_string(const Rational& r) {
    std::ostringstream out;
    out << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
    return out.str();
}

Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    return Rational(num) / Rational(den);
}

TranscriptStore::TranscriptStore(int n_count) : n(n_count) {
    nodes.resize(n_count);
    for (int i = 0; i < n_count; ++i) nodes[i].node = i;
}

namespace {

void write_record(std::ostream& out, const std::string& payload) {
    out << payload.size() << "\n" << payload;
}

template <typename T>
void append_values(std::ostringstream& out, const std::vector<T>& values) {
    for (const auto& v : values) out << " " << v;
}

void append_rationals(std::ostringstream& out, const std::vector<Rational>& values) {
    for (const auto& v : values) out << " " << rational_to_string(v);
}

std::vector<BigInt> read_bigints(std::istringstream& in) {
    std::vector<BigInt> out;
    std::string tok;
    while (in >> tok) out.push_back(BigInt(tok));
    return out;
}

std::vector<Rational> read_rationals(std::istringstream& in, size_t count) {
    std::vector<Rational> out;
    std::string tok;
    while (out.size() < count && in >> tok) out.push_back(rational_from_string(tok));
    return out;
}

std::vector<Rational> read_rationals(std::istringstream& in) {
    std::vector<Rational> out;
    std::string tok;
    while (in >> tok) out.push_back(rational_from_string(tok));
    return out;
}

std::string node_filename(int node) {
    std::ostringstream name;
    name << "node_" << std::setw(4) << std::setfill('0') << node << ".rec";
    return name.str();
}

// One payload string per record, in a stable order.
std::vector<std::string> node_payloads(const NodeTranscript& nt) {
    std::vector<std::string> out;
    for (const auto& r : nt.randoms) {
        std::ostringstream p;
        p << "R " << r.iter << " " << r.peer << " " << (r.sent ? 1 : 0);
        append_values(p, r.values);
        p << "\n";
        out.push_back(p.str());
    }
    for (const auto& r : nt.own_inputs) {
        std::ostringstream p;
        p << "I " << r.iter;
        append_values(p, r.values);
        p << "\n";
        out.push_back(p.str());
    }
    for (const auto& r : nt.own_shares) {
        std::ostringstream p;
        p << "O " << r.iter;
        append_values(p, r.values);
        p << "\n";
        out.push_back(p.str());
    }
    for (const auto& r : nt.sync_msgs) {
        std::ostringstream p;
        p << "S " << r.iter << " " << r.round << " " << r.from;
        append_rationals(p, r.values);
        p << "\n";
        out.push_back(p.str());
    }
    for (const auto& r : nt.gossip_events) {
        std::ostringstream p;
        p << "G " << r.iter << " " << r.event << " " << r.partner << " " << r.self_before.size();
        append_rationals(p, r.self_before);
        append_rationals(p, r.partner_before);
        p << "\n";
        out.push_back(p.str());
    }
    for (const auto& r : nt.tree_msgs) {
        std::ostringstream p;
        p << "T " << r.iter << " " << r.peer << " " << (r.up ? 1 : 0) << " " << (r.sent ? 1 : 0);
        append_rationals(p, r.values);
        p << "\n";
        out.push_back(p.str());
    }
    return out;
}

}  // namespace

void TranscriptStore::save(const std::string& dir) const {
    fs::create_directories(dir);
    for (const auto& nt : nodes) {
        std::ofstream out(fs::path(dir) / node_filename(nt.node), std::ios::binary);
        for (const auto& r : node_payloads(nt)) write_record(out, r);
    }
    std::ofstream pub(fs::path(dir) / "published.txt", std::ios::binary);
    pub << "n " << n << " k " << k << " dim " << dim << " scale " << scale << " p " << p
        << " protocol " << protocol << "\n";
    pub << "rounds";
    for (long r : rounds_per_iter) pub << " " << r;
    pub << "\n";
    for (const auto& rec : published) {
        pub << "iter " << rec.iter << " sums " << rec.field_sums.size();
        for (const auto& v : rec.field_sums) pub << " " << v;
        pub << " centers " << rec.centers.size();
        pub << std::setprecision(17);
        for (double c : rec.centers) pub << " " << c;
        pub << "\n";
    }
}

namespace {

void parse_record(NodeTranscript& nt, const std::string& payload) {
    std::istringstream in(payload);
    std::string kind;
    in >> kind;
    if (kind == "R") {
        RandomRecord r;
        int sent;
        in >> r.iter >> r.peer >> sent;
        r.sent = sent != 0;
        r.values = read_bigints(in);
        nt.randoms.push_back(std::move(r));
    } else if (kind == "I") {
        OwnInputRecord r;
        in >> r.iter;
        r.values = read_bigints(in);
        nt.own_inputs.push_back(std::move(r));
    } else if (kind == "O") {
        OwnShareRecord r;
        in >> r.iter;
        r.values = read_bigints(in);
        nt.own_shares.push_back(std::move(r));
    } else if (kind == "S") {
        SyncMsgRecord r;
        in >> r.iter >> r.round >> r.from;
        r.values = read_rationals(in);
        nt.sync_msgs.push_back(std::move(r));
    } else if (kind == "G") {
        GossipEventRecord r;
        size_t len;
        in >> r.iter >> r.event >> r.partner >> len;
        r.self_before = read_rationals(in, len);
        r.partner_before = read_rationals(in, len);
        nt.gossip_events.push_back(std::move(r));
    } else if (kind == "T") {
        TreeMsgRecord r;
        int up, sent;
        in >> r.iter >> r.peer >> up >> sent;
        r.up = up != 0;
        r.sent = sent != 0;
        r.values = read_rationals(in);
        nt.tree_msgs.push_back(std::move(r));
    } else {
        throw std::runtime_error("transcript: unknown record kind '" + kind + "'");
    }
}

}  // namespace

TranscriptStore TranscriptStore::load(const std::string& dir) {
    std::ifstream pub(fs::path(dir) / "published.txt", std::ios::binary);
    if (!pub) throw std::runtime_error("transcript: cannot open " + dir + "/published.txt");
    TranscriptStore store;
    std::string line;
    std::getline(pub, line);
    {
        std::istringstream in(line);
        std::string key, pstr;
        in >> key >> store.n >> key >> store.k >> key >> store.dim >> key >> store.scale >>
            key >> pstr >> key >> store.protocol;
        store.p = BigInt(pstr);
    }
    std::getline(pub, line);
    {
        std::istringstream in(line);
        std::string key;
        in >> key;
        long r;
        while (in >> r) store.rounds_per_iter.push_back(r);
    }
    while (std::getline(pub, line)) {
        if (line.empty()) continue;
        std::istringstream in(line);
        PublishedRecord rec;
        std::string key, tok;
        size_t count;
        in >> key >> rec.iter >> key >> count;
        for (size_t i = 0; i < count; ++i) {
            in >> tok;
            rec.field_sums.push_back(BigInt(tok));
        }
        in >> key >> count;
        for (size_t i = 0; i < count; ++i) {
            double c;
            in >> c;
            rec.centers.push_back(c);
        }
        store.published.push_back(std::move(rec));
    }
    store.nodes.resize(store.n);
    for (int node = 0; node < store.n; ++node) {
        store.nodes[node].node = node;
        std::ifstream in(fs::path(dir) / node_filename(node), std::ios::binary);
        if (!in) throw std::runtime_error("transcript: missing node file for node " +
                                          std::to_string(node));
        size_t len;
        while (in >> len) {
            in.get();  // newline after the length
            std::string payload(len, '\0');
            in.read(payload.data(), static_cast<std::streamsize>(len));
            parse_record(store.nodes[node], payload);
        }
    }
    return store;
}

}  // namespace secmeans
