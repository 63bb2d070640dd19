#include "stub_vocab.hpp"

#include <cctype>
#include <map>
#include <utility>

#include "unionbench/table.hpp"

namespace unionbench::detail {

namespace {

// 50 built-in topics. Kept small on purpose: six column-name bases and a
// dozen themed words each are enough for the stub to produce same-topic
// vocabulary collisions without real data.
const std::vector<std::pair<std::string, TopicVocabulary>>& topic_table() {
    static const std::vector<std::pair<std::string, TopicVocabulary>> topics = {
        {"World Geography",
         {{"Country", "Capital", "Continent", "River", "Mountain", "Border"},
          {"alpine", "coastal", "plateau", "delta", "peninsula", "highland", "basin",
           "valley", "tropical", "arid", "fjord", "steppe"}}},
        {"Art History",
         {{"Painting", "Artist", "Movement", "Museum", "Medium", "Patron"},
          {"baroque", "fresco", "canvas", "impressionist", "renaissance", "cubist",
           "gallery", "portrait", "landscape", "sculpture", "pigment", "engraving"}}},
        {"Genealogy",
         {{"Ancestor", "Surname", "Birthplace", "Generation", "Lineage", "Descendant"},
          {"maternal", "paternal", "heirloom", "census", "parish", "registry",
           "migration", "household", "kinship", "estate", "archive", "baptism"}}},
        {"Veterinary Medicine",
         {{"Animal", "Breed", "Diagnosis", "Treatment", "Clinic", "Vaccine"},
          {"canine", "feline", "equine", "bovine", "vaccination", "surgical", "dosage",
           "recovery", "chronic", "dietary", "parasite", "checkup"}}},
        {"Ecology",
         {{"Species", "Habitat", "Biome", "Population", "Predator", "Conservation"},
          {"wetland", "grassland", "endangered", "invasive", "migratory", "nocturnal",
           "symbiotic", "foraging", "nesting", "riparian", "endemic", "keystone"}}},
        {"Gardening",
         {{"Plant", "Soil", "Season", "Fertilizer", "Bloom", "Pruning"},
          {"perennial", "annual", "compost", "mulch", "seedling", "germination",
           "loamy", "drought", "shade", "trellis", "cutting", "hardy"}}},
        {"Engineering",
         {{"Project", "Material", "Load", "Structure", "Tolerance", "Inspection"},
          {"tensile", "beam", "weld", "alloy", "stress", "girder", "turbine",
           "hydraulic", "prototype", "blueprint", "torque", "fatigue"}}},
        {"Astronomy",
         {{"Star", "Planet", "Galaxy", "Telescope", "Orbit", "Constellation"},
          {"stellar", "nebula", "luminous", "dwarf", "spiral", "elliptical",
           "supernova", "cluster", "photon", "parallax", "celestial", "equatorial"}}},
        {"Computer Science",
         {{"Algorithm", "Language", "Compiler", "Dataset", "Protocol", "Processor"},
          {"runtime", "recursive", "binary", "heuristic", "cache", "kernel", "latency",
           "parallel", "syntax", "compiled", "hashing", "distributed"}}},
        {"Culture",
         {{"Festival", "Tradition", "Cuisine", "Costume", "Ritual", "Folklore"},
          {"ceremonial", "ancestral", "communal", "seasonal", "harvest", "heritage",
           "customary", "oral", "woven", "symbolic", "festive", "regional"}}},
        {"Law",
         {{"Case", "Court", "Statute", "Verdict", "Attorney", "Clause"},
          {"appellate", "plaintiff", "defendant", "federal", "binding", "precedent",
           "tort", "liability", "hearing", "counsel", "ruling", "amendment"}}},
        {"Photography",
         {{"Camera", "Lens", "Exposure", "Subject", "Print", "Filter"},
          {"aperture", "shutter", "focal", "monochrome", "portrait", "telephoto",
           "candid", "overexposed", "grain", "tripod", "negative", "panoramic"}}},
        {"Biology",
         {{"Organism", "Cell", "Gene", "Protein", "Enzyme", "Tissue"},
          {"membrane", "nucleus", "mitosis", "chromosome", "metabolic", "receptor",
           "organelle", "synthesis", "cellular", "microbial", "genome", "peptide"}}},
        {"Climatology",
         {{"Region", "Temperature", "Rainfall", "Wind", "Humidity", "Forecast"},
          {"monsoon", "drought", "maritime", "continental", "subtropical", "anomaly",
           "precipitation", "frontal", "cyclonic", "seasonal", "thermal", "gradient"}}},
        {"Economics",
         {{"Market", "Inflation", "Currency", "Export", "Sector", "Policy"},
          {"fiscal", "monetary", "gross", "deficit", "surplus", "tariff", "commodity",
           "equilibrium", "demand", "recession", "subsidy", "aggregate"}}},
        {"Psychology",
         {{"Behavior", "Study", "Therapy", "Memory", "Emotion", "Disorder"},
          {"cognitive", "perceptual", "subconscious", "empirical", "clinical",
           "anxiety", "conditioning", "stimulus", "placebo", "introspective",
           "affective", "longitudinal"}}},
        {"Sociology",
         {{"Community", "Class", "Survey", "Institution", "Mobility", "Norm"},
          {"demographic", "urban", "cohort", "stratified", "marginal", "collective",
           "ethnographic", "kinship", "secular", "migration", "inequality",
           "suburban"}}},
        {"Sports",
         {{"Team", "Player", "League", "Stadium", "Coach", "Tournament"},
          {"championship", "offensive", "defensive", "playoff", "varsity", "amateur",
           "relay", "sprint", "endurance", "penalty", "homefield", "seasonal"}}},
        {"Politics",
         {{"Party", "Election", "Candidate", "District", "Ballot", "Campaign"},
          {"incumbent", "coalition", "electoral", "legislative", "partisan",
           "referendum", "majority", "caucus", "mandate", "polling", "grassroots",
           "bipartisan"}}},
        {"Fashion",
         {{"Designer", "Fabric", "Collection", "Trend", "Garment", "Runway"},
          {"couture", "tailored", "vintage", "silk", "pleated", "embroidered",
           "minimalist", "bespoke", "textile", "pattern", "hemline", "accessory"}}},
        {"Geology",
         {{"Rock", "Mineral", "Stratum", "Fault", "Era", "Deposit"},
          {"igneous", "sedimentary", "metamorphic", "basalt", "quartz", "tectonic",
           "erosion", "fossilized", "volcanic", "limestone", "crustal", "seismic"}}},
        {"World History",
         {{"Empire", "Dynasty", "Battle", "Treaty", "Monarch", "Era"},
          {"medieval", "colonial", "imperial", "feudal", "ancient", "revolution",
           "conquest", "siege", "chronicle", "artifact", "reign", "armistice"}}},
        {"Architecture",
         {{"Building", "Facade", "Blueprint", "Column", "Arch", "Foundation"},
          {"gothic", "modernist", "brutalist", "vaulted", "ornate", "structural",
           "masonry", "cantilever", "atrium", "symmetrical", "restored", "terraced"}}},
        {"Horticulture",
         {{"Cultivar", "Greenhouse", "Graft", "Yield", "Rootstock", "Orchard"},
          {"propagation", "pollination", "hybrid", "dormant", "irrigation", "nursery",
           "budding", "espalier", "foliage", "ripening", "canopy", "thinning"}}},
        {"Environment",
         {{"Emission", "Pollutant", "Recycling", "Ecosystem", "Resource", "Regulation"},
          {"renewable", "sustainable", "carbon", "biodegradable", "wetland",
           "deforestation", "conservation", "landfill", "aquifer", "compliance",
           "habitat", "ozone"}}},
        {"Science",
         {{"Experiment", "Hypothesis", "Laboratory", "Measurement", "Theory", "Sample"},
          {"empirical", "quantitative", "control", "variable", "observed",
           "replicated", "calibrated", "reviewed", "falsifiable", "systematic",
           "precision", "anomaly"}}},
        {"Religion",
         {{"Faith", "Temple", "Scripture", "Ritual", "Clergy", "Pilgrimage"},
          {"sacred", "liturgical", "monastic", "devotional", "orthodox", "secular",
           "congregational", "doctrinal", "ceremonial", "ascetic", "reverent",
           "canonical"}}},
        {"Geophysics",
         {{"Seismograph", "Magnitude", "Epicenter", "Crust", "Mantle", "Survey"},
          {"seismic", "tectonic", "magnetic", "gravitational", "subduction",
           "resonance", "velocity", "refraction", "borehole", "anomaly",
           "lithospheric", "geothermal"}}},
        {"Business",
         {{"Company", "Revenue", "Merger", "Brand", "Headquarters", "Stakeholder"},
          {"quarterly", "corporate", "startup", "acquisition", "dividend", "logistics",
           "franchise", "wholesale", "retail", "profitable", "venture", "portfolio"}}},
        {"Bioinformatics",
         {{"Sequence", "Genome", "Alignment", "Database", "Annotation", "Pipeline"},
          {"genomic", "transcript", "phylogenetic", "motif", "assembly", "variant",
           "expression", "clustering", "proteomic", "locus", "homologous", "curated"}}},
        {"Language",
         {{"Dialect", "Grammar", "Phoneme", "Script", "Speaker", "Translation"},
          {"linguistic", "vernacular", "syntactic", "tonal", "fluent", "idiomatic",
           "morphological", "spoken", "literary", "loanword", "phonetic",
           "bilingual"}}},
        {"Cooking",
         {{"Recipe", "Ingredient", "Cuisine", "Technique", "Course", "Seasoning"},
          {"braised", "roasted", "marinated", "simmered", "caramelized", "savory",
           "aromatic", "garnished", "kneaded", "whisked", "zested", "poached"}}},
        {"Astronautics",
         {{"Spacecraft", "Mission", "Launch", "Payload", "Astronaut", "Module"},
          {"orbital", "propulsion", "trajectory", "docking", "reentry", "capsule",
           "booster", "telemetry", "suborbital", "lunar", "thruster", "crewed"}}},
        {"Medicine",
         {{"Patient", "Symptom", "Prescription", "Hospital", "Procedure", "Dosage"},
          {"clinical", "chronic", "acute", "diagnostic", "surgical", "outpatient",
           "pathology", "remission", "therapeutic", "intravenous", "benign",
           "preventive"}}},
        {"Chemistry",
         {{"Element", "Compound", "Reaction", "Solvent", "Catalyst", "Bond"},
          {"molecular", "organic", "ionic", "covalent", "titration", "oxidized",
           "aqueous", "polymer", "reagent", "distilled", "volatile", "synthesis"}}},
        {"Physics",
         {{"Particle", "Force", "Energy", "Wavelength", "Field", "Momentum"},
          {"quantum", "relativistic", "kinetic", "thermal", "electromagnetic",
           "inertial", "oscillating", "nuclear", "photon", "entropy", "velocity",
           "acceleration"}}},
        {"Mathematics",
         {{"Theorem", "Equation", "Function", "Matrix", "Proof", "Conjecture"},
          {"algebraic", "geometric", "integral", "derivative", "polynomial",
           "symmetric", "convergent", "rational", "topological", "discrete",
           "infinite", "axiomatic"}}},
        {"Music",
         {{"Composer", "Instrument", "Symphony", "Genre", "Conductor", "Album"},
          {"orchestral", "acoustic", "melodic", "harmonic", "chamber", "baroque",
           "tempo", "chord", "ensemble", "operatic", "rhythmic", "improvised"}}},
        {"Literature",
         {{"Author", "Novel", "Poem", "Publisher", "Genre", "Protagonist"},
          {"narrative", "lyrical", "satirical", "allegorical", "prose", "manuscript",
           "anthology", "metaphor", "tragic", "epistolary", "canonical",
           "serialized"}}},
        {"Film",
         {{"Director", "Screenplay", "Studio", "Scene", "Actor", "Premiere"},
          {"cinematic", "documentary", "animated", "noir", "montage", "widescreen",
           "dubbed", "scripted", "indie", "blockbuster", "storyboard", "spotlight"}}},
        {"Education",
         {{"School", "Curriculum", "Teacher", "Enrollment", "Degree", "Semester"},
          {"academic", "vocational", "tuition", "scholarship", "literacy", "pedagogy",
           "accredited", "syllabus", "tutoring", "graduate", "remedial",
           "extracurricular"}}},
        {"Agriculture",
         {{"Crop", "Farm", "Harvest", "Livestock", "Irrigation", "Acreage"},
          {"arable", "pasture", "organic", "rotation", "silage", "fallow", "tillage",
           "granary", "orchard", "fertile", "sustainable", "seasonal"}}},
        {"Transportation",
         {{"Route", "Vehicle", "Terminal", "Freight", "Schedule", "Fare"},
          {"commuter", "intercity", "diesel", "electric", "logistics", "transit",
           "highway", "maritime", "cargo", "junction", "timetable", "expressway"}}},
        {"Finance",
         {{"Portfolio", "Bond", "Interest", "Asset", "Ledger", "Dividend"},
          {"fiscal", "liquidity", "equity", "yield", "maturity", "hedged", "compound",
           "secured", "depreciated", "audited", "solvent", "leveraged"}}},
        {"Nutrition",
         {{"Nutrient", "Calorie", "Vitamin", "Diet", "Serving", "Supplement"},
          {"dietary", "protein", "mineral", "fiber", "metabolic", "fortified",
           "organic", "saturated", "wholegrain", "hydration", "antioxidant",
           "balanced"}}},
        {"Archaeology",
         {{"Site", "Artifact", "Excavation", "Stratum", "Relic", "Specimen"},
          {"ancient", "burial", "ceramic", "neolithic", "sediment", "inscription",
           "ruin", "preserved", "catalogued", "prehistoric", "fragment", "trench"}}},
        {"Meteorology",
         {{"Storm", "Pressure", "Front", "Radar", "Forecast", "Visibility"},
          {"barometric", "cumulus", "turbulent", "gust", "overcast", "dewpoint",
           "squall", "atmospheric", "convective", "humid", "isobar", "windchill"}}},
        {"Oceanography",
         {{"Current", "Reef", "Depth", "Salinity", "Tide", "Trench"},
          {"pelagic", "abyssal", "coastal", "plankton", "upwelling", "benthic",
           "brackish", "sonar", "buoy", "estuary", "lagoon", "submarine"}}},
        {"Zoology",
         {{"Mammal", "Reptile", "Bird", "Insect", "Skeleton", "Classification"},
          {"vertebrate", "carnivore", "herbivore", "nocturnal", "amphibious",
           "plumage", "marsupial", "migratory", "hibernating", "venomous", "taxonomy",
           "predatory"}}},
        {"Botany",
         {{"Leaf", "Stem", "Flower", "Root", "Pollen", "Chlorophyll"},
          {"photosynthesis", "deciduous", "evergreen", "vascular", "flowering",
           "herbaceous", "stamen", "germination", "tuber", "frond", "sapling",
           "botanical"}}},
    };
    return topics;
}

}  // namespace

const TopicVocabulary* find_topic_vocabulary(const std::string& topic) {
    static const std::map<std::string, const TopicVocabulary*> index = [] {
        std::map<std::string, const TopicVocabulary*> m;
        for (const auto& [name, vocab] : topic_table())
            m[to_lower(name)] = &vocab;
        return m;
    }();
    auto it = index.find(to_lower(trim(topic)));
    return it == index.end() ? nullptr : it->second;
}

TopicVocabulary generic_vocabulary(const std::string& topic) {
    TopicVocabulary v;
    std::string word;
    auto flush = [&](bool as_term) {
        if (word.empty())
            return;
        if (as_term) {
            word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
            v.terms.push_back(word);
        } else {
            v.values.push_back(to_lower(word));
        }
        word.clear();
    };
    for (unsigned char c : topic) {
        if (std::isalnum(c))
            word.push_back(static_cast<char>(c));
        else
            flush(true);
    }
    flush(true);
    for (const auto& t : v.terms)
        v.values.push_back(to_lower(t));
    for (const char* extra : {"Item", "Detail", "Group", "Source", "Record", "Entry"})
        if (v.terms.size() < 6)
            v.terms.push_back(extra);
        else
            break;
    for (const char* filler : {"general", "common", "sample", "varied", "typical",
                               "standard", "related", "assorted", "primary",
                               "secondary", "notable", "plain"})
        v.values.push_back(filler);
    return v;
}

std::vector<std::string> builtin_topic_names() {
    std::vector<std::string> names;
    for (const auto& [name, vocab] : topic_table())
        names.push_back(name);
    return names;
}

}  // namespace unionbench::detail
