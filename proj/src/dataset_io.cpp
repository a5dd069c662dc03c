#include "bta/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bta/wire.hpp"

namespace bta {

namespace {

constexpr uint32_t kSamplesVersion = 1;
constexpr char kSamplesMagic[5] = "BTAS";

Matrix read_matrix(std::istream& in) {
    const uint32_t rows = wire::read_u32(in);
    const uint32_t cols = wire::read_u32(in);
    if (rows > 1u << 20 || cols > 1u << 20)
        throw data_error("samples.bin: implausible matrix shape (corrupt file?)");
    Matrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (size_t i = 0; i < m.size(); ++i) m[i] = wire::read_f64(in);
    return m;
}

void write_matrix(std::ostream& out, const Matrix& m) {
    wire::write_u32(out, static_cast<uint32_t>(m.rows()));
    wire::write_u32(out, static_cast<uint32_t>(m.cols()));
    for (size_t i = 0; i < m.size(); ++i) wire::write_f64(out, m[i]);
}

}  // namespace

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    nlohmann::json manifest;
    manifest["format_version"] = 1;
    manifest["name"] = ds.name;
    manifest["channels"] = ds.channel_names;
    manifest["channel_count"] = ds.channel_names.size();
    manifest["sample_rate"] = ds.sample_rate;
    manifest["sample_count"] = ds.samples.size();
    manifest["temporal_len"] = ds.samples.empty() ? 0 : ds.samples[0].temporal.cols();
    manifest["spectral_len"] = ds.samples.empty() ? 0 : ds.samples[0].spectral.cols();
    manifest["bands"] = nlohmann::json::array();
    for (const Band& b : ds.bands)
        manifest["bands"].push_back({{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}});
    std::ofstream mf(dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
    if (!mf) throw data_error("save_dataset: cannot write manifest in " + dir.string());

    std::ofstream sf(dir / "samples.bin", std::ios::binary);
    sf.write(kSamplesMagic, 4);
    wire::write_u32(sf, kSamplesVersion);
    wire::write_u32(sf, static_cast<uint32_t>(ds.samples.size()));
    for (const EegSample& s : ds.samples) {
        wire::write_string(sf, s.group_id);
        wire::write_i8(sf, static_cast<int8_t>(s.label));
        write_matrix(sf, s.temporal);
        write_matrix(sf, s.spectral);
    }
    if (!sf) throw data_error("save_dataset: cannot write samples in " + dir.string());

    std::ofstream of(dir / "montage.txt");
    of << ds.montage.to_text();
    if (!of) throw data_error("save_dataset: cannot write montage in " + dir.string());
}

Dataset load_dataset(const std::filesystem::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw data_error("load_dataset: missing manifest.json in " + dir.string());
    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("load_dataset: bad manifest: " + std::string(e.what()));
    }
    if (manifest.value("format_version", 0) != 1)
        throw data_error("load_dataset: unsupported manifest format_version");

    Dataset ds;
    ds.name = manifest.value("name", "");
    ds.channel_names = manifest.at("channels").get<std::vector<std::string>>();
    ds.sample_rate = manifest.at("sample_rate").get<double>();
    for (const auto& jb : manifest.at("bands"))
        ds.bands.push_back({jb.at("name").get<std::string>(), jb.at("lo").get<double>(),
                            jb.at("hi").get<double>()});

    std::ifstream of(dir / "montage.txt");
    if (!of) throw data_error("load_dataset: missing montage.txt in " + dir.string());
    std::stringstream mbuf;
    mbuf << of.rdbuf();
    ds.montage = Montage::parse(mbuf.str());
    for (const std::string& name : ds.channel_names)
        if (!ds.montage.has_channel(name))
            throw data_error("load_dataset: channel '" + name + "' missing from montage");

    std::ifstream sf(dir / "samples.bin", std::ios::binary);
    if (!sf) throw data_error("load_dataset: missing samples.bin in " + dir.string());
    char magic[4];
    sf.read(magic, 4);
    if (!sf || std::string(magic, 4) != kSamplesMagic)
        throw data_error("load_dataset: bad samples.bin magic");
    if (wire::read_u32(sf) != kSamplesVersion)
        throw data_error("load_dataset: unsupported samples.bin version");
    const uint32_t count = wire::read_u32(sf);
    ds.samples.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        EegSample s;
        s.group_id = wire::read_string(sf);
        s.label = wire::read_i8(sf);
        s.temporal = read_matrix(sf);
        s.spectral = read_matrix(sf);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

Recording load_recording(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("load_recording: cannot open " + path.string());
    Recording rec;
    std::string line;
    bool in_signal = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!in_signal) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "channels") {
                std::string name;
                while (ls >> name) rec.channel_names.push_back(name);
            } else if (key == "rate") {
                ls >> rec.sample_rate;
            } else if (key == "group") {
                ls >> rec.group_id;
            } else if (key == "label") {
                std::string v;
                ls >> v;
                if (v != "-") rec.label = std::stoi(v);
            } else if (key == "signal") {
                in_signal = true;
            } else {
                throw data_error("load_recording: unknown header '" + key + "' in " +
                                 path.string());
            }
        } else {
            std::istringstream ls(line);
            std::vector<double> row;
            double v;
            while (ls >> v) row.push_back(v);
            if (!row.empty()) rows.push_back(std::move(row));
        }
    }
    if (rec.channel_names.empty())
        throw data_error("load_recording: no channels header in " + path.string());
    for (size_t i = 0; i < rec.channel_names.size(); ++i)
        for (size_t j = i + 1; j < rec.channel_names.size(); ++j)
            if (rec.channel_names[i] == rec.channel_names[j])
                throw data_error("load_recording: duplicate channel '" +
                                 rec.channel_names[i] + "' in " + path.string());
    if (rec.sample_rate <= 0.0)
        throw data_error("load_recording: missing or bad rate in " + path.string());
    if (rows.size() != rec.channel_names.size())
        throw data_error("load_recording: " + std::to_string(rows.size()) +
                         " signal rows for " + std::to_string(rec.channel_names.size()) +
                         " channels in " + path.string());
    for (size_t e = 1; e < rows.size(); ++e)
        if (rows[e].size() != rows[0].size())
            throw data_error("load_recording: ragged signal rows in " + path.string());
    rec.signal = Matrix(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t e = 0; e < rows.size(); ++e)
        for (size_t i = 0; i < rows[e].size(); ++i)
            rec.signal(static_cast<int>(e), static_cast<int>(i)) = rows[e][i];
    return rec;
}

std::vector<Recording> load_recordings_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".rec")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw data_error("load_recordings_dir: no .rec files in " + dir.string());
    std::vector<Recording> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(load_recording(f));
    return out;
}

void save_recording(const Recording& rec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("save_recording: cannot open " + path.string());
    out << "channels";
    for (const std::string& name : rec.channel_names) out << " " << name;
    out << "\nrate " << rec.sample_rate << "\ngroup " << rec.group_id << "\n";
    if (rec.label) out << "label " << *rec.label << "\n";
    out << "signal\n";
    out.precision(17);
    for (int e = 0; e < rec.signal.rows(); ++e) {
        for (int i = 0; i < rec.signal.cols(); ++i)
            out << (i ? " " : "") << rec.signal(e, i);
        out << "\n";
    }
    if (!out) throw data_error("save_recording: write failed for " + path.string());
}

}  // namespace bta
