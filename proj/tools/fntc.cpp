#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fnt/codec.hpp>
#include <fnt/errors.hpp>
#include <fnt/overlay.hpp>

namespace fs = std::filesystem;

namespace {

std::vector<std::byte> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::byte> bytes(raw.size());
    std::memcpy(bytes.data(), raw.data(), raw.size());
    return bytes;
}

void write_file(const fs::path& path, std::span<const std::byte> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

fnt::NodeCoord parse_coord(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("coordinate must be step,position: " + text);
    std::size_t used = 0;
    const unsigned long step = std::stoul(text.substr(0, comma), &used);
    if (used != comma) throw std::runtime_error("bad coordinate: " + text);
    const std::string rest = text.substr(comma + 1);
    const unsigned long position = std::stoul(rest, &used);
    if (used != rest.size()) throw std::runtime_error("bad coordinate: " + text);
    return {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(position)};
}

std::uint32_t derive_size(std::uint32_t k, std::uint32_t requested) {
    if (requested != 0) {
        if (requested < 2 || requested > 65536 || (requested & (requested - 1)) != 0 ||
            requested < k)
            throw std::runtime_error("--n must be a power of two in [2, 65536] and >= k");
        return requested;
    }
    return std::max<std::uint32_t>(2, std::bit_ceil(k));
}

int cmd_encode(const std::string& input, std::uint32_t k, std::uint32_t n_override,
               bool all_last_step, const std::vector<std::string>& coord_texts,
               const std::string& outdir) {
    const auto payload = read_file(input);
    const std::uint32_t n = derive_size(k, n_override);
    const auto u = static_cast<unsigned>(std::countr_zero(n));
    const fnt::FftGraph graph(u, k);
    const fnt::SourceObject src = fnt::split(payload, k);

    std::vector<fnt::CodedBlock> blocks;
    if (all_last_step) {
        blocks = fnt::encode_last_step(src, graph);
    } else {
        if (coord_texts.empty())
            throw std::runtime_error("need --all-last-step or at least one --coord");
        for (const std::string& text : coord_texts)
            blocks.push_back(fnt::encode_block(src, graph, parse_coord(text)));
    }

    // Stage every container before touching the filesystem so a failure
    // leaves no partial output behind.
    std::vector<std::pair<fs::path, std::vector<std::byte>>> staged;
    for (const fnt::CodedBlock& block : blocks) {
        fnt::Share share{u, k, src.block_length, src.original_length, block};
        std::ostringstream name;
        name << "block_s" << block.coord.step << "_p" << block.coord.position << ".fntc";
        staged.emplace_back(fs::path(outdir) / name.str(), fnt::pack_share(share));
    }

    std::vector<fs::path> written;
    try {
        for (const auto& [path, bytes] : staged) {
            write_file(path, bytes);
            written.push_back(path);
        }
    } catch (...) {
        std::error_code ec;
        for (const fs::path& path : written) fs::remove(path, ec);
        throw;
    }
    std::cout << "wrote " << staged.size() << " container(s) to " << outdir << "\n";
    return 0;
}

int cmd_decode(const std::vector<std::string>& share_paths, const std::string& output) {
    std::vector<fnt::Share> shares;
    for (const std::string& path : share_paths) {
        const auto bytes = read_file(path);
        shares.push_back(fnt::parse_share(bytes));
    }
    const fnt::Share& first = shares.front();
    for (const fnt::Share& s : shares) {
        if (s.log2_size != first.log2_size || s.block_count != first.block_count ||
            s.block_length != first.block_length || s.original_length != first.original_length)
            throw fnt::FormatError("share containers carry mixed metadata");
    }

    const fnt::FftGraph graph(first.log2_size, first.block_count);
    std::vector<fnt::CodedBlock> blocks;
    blocks.reserve(shares.size());
    for (fnt::Share& s : shares) blocks.push_back(std::move(s.block));

    const fnt::SymbolMatrix sources = fnt::decode(graph, blocks, first.block_length);
    const auto payload = fnt::merge(sources, first.original_length);
    write_file(output, payload);
    std::cout << "decoded " << payload.size() << " byte(s) to " << output << "\n";
    return 0;
}

int cmd_inspect(std::uint32_t n, std::uint32_t k) {
    if (n < 2 || n > 65536 || (n & (n - 1)) != 0)
        throw std::runtime_error("--n must be a power of two in [2, 65536]");
    const fnt::FftGraph graph(static_cast<unsigned>(std::countr_zero(n)), k);
    graph.dump(std::cout);
    return 0;
}

int cmd_simulate(const std::string& scenario_path, std::uint64_t seed, std::uint32_t n0,
                 std::uint32_t k0, const std::string& output) {
    if (n0 < 2 || n0 > 65536 || (n0 & (n0 - 1)) != 0)
        throw std::runtime_error("--n must be a power of two in [2, 65536]");
    std::ifstream in(scenario_path);
    if (!in) throw std::runtime_error("cannot open " + scenario_path);
    const auto events = fnt::parse_scenario(in);

    fnt::OverlayState state(static_cast<unsigned>(std::countr_zero(n0)), k0);
    const fnt::ScenarioOutcome outcome = fnt::run_scenario(state, events, seed);

    if (output.empty() || output == "-") {
        fnt::write_metrics_csv(std::cout, outcome.rows);
    } else {
        std::ofstream out(output, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + output + " for writing");
        fnt::write_metrics_csv(out, outcome.rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact FFT network coding over GF(65537): MDS share codec and overlay simulator"};
    app.require_subcommand(1);
    int rc = 0;

    auto* encode = app.add_subcommand("encode", "split a file and write coded share containers");
    std::string enc_input, enc_out;
    std::uint32_t enc_k = 0, enc_n = 0;
    bool enc_all = false;
    std::vector<std::string> enc_coords;
    encode->add_option("input", enc_input, "payload file")->required();
    encode->add_option("--k", enc_k, "source block count")->required()->check(CLI::PositiveNumber);
    encode->add_option("--n", enc_n, "graph size override (power of two >= k)");
    encode->add_flag("--all-last-step", enc_all, "encode every last-step position");
    encode->add_option("--coord", enc_coords, "node coordinate step,position (repeatable)");
    encode->add_option("--out", enc_out, "output directory")->required();
    encode->callback(
        [&] { rc = cmd_encode(enc_input, enc_k, enc_n, enc_all, enc_coords, enc_out); });

    auto* decode = app.add_subcommand("decode", "recover the payload from share containers");
    std::vector<std::string> dec_shares;
    std::string dec_out;
    decode->add_option("shares", dec_shares, "share container files")->required();
    decode->add_option("--out", dec_out, "output file")->required();
    decode->callback([&] { rc = cmd_decode(dec_shares, dec_out); });

    auto* inspect = app.add_subcommand("inspect", "dump the computation graph wiring");
    std::uint32_t ins_n = 0, ins_k = 0;
    inspect->add_option("--n", ins_n, "graph size (power of two)")->required();
    inspect->add_option("--k", ins_k, "live source count")->required();
    inspect->callback([&] { rc = cmd_inspect(ins_n, ins_k); });

    auto* simulate = app.add_subcommand("simulate", "replay a churn scenario and emit metrics");
    std::string sim_scenario, sim_out;
    std::uint64_t sim_seed = 0;
    std::uint32_t sim_n = 4, sim_k = 0;
    simulate->add_option("scenario", sim_scenario, "scenario file")->required();
    simulate->add_option("--seed", sim_seed, "probe sampling seed");
    simulate->add_option("--n", sim_n, "initial graph size (power of two)");
    simulate->add_option("--k", sim_k, "initial live sources (default: n)");
    simulate->add_option("--out", sim_out, "CSV output file (default: stdout)");
    simulate->callback([&] { rc = cmd_simulate(sim_scenario, sim_seed, sim_n, sim_k, sim_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    } catch (const fnt::InsufficientRankError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
