"""Writes drugbank_sample.nt: a small synthetic DrugBank-style instance graph."""

import random

DV = "http://bio2rdf.org/drugbank_vocabulary:"
DB = "http://bio2rdf.org/drugbank:"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
XSD = "http://www.w3.org/2001/XMLSchema#"
EXT = {
    "uniprot": "http://bio2rdf.org/uniprot_vocabulary:Resource",
    "genbank": "http://bio2rdf.org/genbank_vocabulary:Resource",
    "pubmed": "http://bio2rdf.org/pubmed_vocabulary:Resource",
    "pharmgkb": "http://bio2rdf.org/pharmgkb_vocabulary:Resource",
    "kegg": "http://bio2rdf.org/kegg_vocabulary:Resource",
}

# (domain, predicate, range, instances); a range starting with xsd: is a literal
RELATIONS = ["Target-Relation", "Enzyme-Relation", "Carrier-Relation", "Transporter-Relation"]
PROTEINS = ["Target", "Enzyme", "Carrier", "Transporter"]
POLYPEPTIDES = PROTEINS + ["Polypeptide", "Gene"]
PROPERTIES = ["LogP", "Molecular-Weight", "Water-Solubility", "pKa", "Melting-Point", "Boiling-Point", "Polar-Surface-Area"]
DRUG_GROUPS = ["Drug", "Approved-Drug", "Experimental-Drug", "Biotech-Drug", "Nutraceutical", "Illicit-Drug"]
PRODUCTS = ["Pharmaceutical", "Package", "Mixture", "Kit"]

SCHEMA = (
    # drug to relation objects and back
    [("Drug", p.lower(), r, 20) for p, r in zip(PROTEINS, RELATIONS)]
    + [(r, p.lower(), p, 15) for p, r in zip(PROTEINS, RELATIONS)]
    + [(r, "drug", "Drug", 15) for r in RELATIONS]
    + [(r, "action", "Action", 12) for r in RELATIONS]
    + [(r, "reference", EXT["pubmed"], 10) for r in RELATIONS]
    + [(r, "known-action", "Known-Action", 8) for r in RELATIONS]
    # cross references of proteins
    + [(c, "x-uniprot", EXT["uniprot"], 12) for c in POLYPEPTIDES]
    + [(c, "x-genbank", EXT["genbank"], 10) for c in POLYPEPTIDES]
    + [(c, "x-hgnc", "HGNC-Entry", 8) for c in POLYPEPTIDES]
    + [(c, "cellular-location", "Cellular-Location", 8) for c in POLYPEPTIDES]
    + [(c, "organism", "Organism", 6) for c in POLYPEPTIDES]
    # physico-chemical properties
    + [("Drug", "calculated-properties", c, 15) for c in PROPERTIES[:3]]
    + [("Drug", "experimental-properties", c, 10) for c in PROPERTIES[2:]]
    + [(c, "source", "Source", 12) for c in PROPERTIES]
    + [(c, "value", "xsd:decimal", 12) for c in PROPERTIES]
    + [(c, "kind", "Property-Kind", 10) for c in PROPERTIES]
    + [(c, "unit", "Unit", 8) for c in PROPERTIES]
    # products
    + [(g, "product", "Pharmaceutical", 6) for g in DRUG_GROUPS]
    + [(g, "mixture", "Mixture", 3) for g in DRUG_GROUPS]
    + [(c, "manufacturer", "Manufacturer", 10) for c in PRODUCTS]
    + [(c, "dosage", "Dosage", 10) for c in PRODUCTS]
    + [(c, "price", "Price", 8) for c in PRODUCTS]
    + [(c, "approval", "Approval-Status", 6) for c in PRODUCTS]
    # pharmacology and external identifiers, recorded per drug group
    + [
        (g, p, r, n)
        for g in DRUG_GROUPS
        for p, r, n in [
            ("absorption", "Absorption", 6),
            ("protein-binding", "Protein-Binding", 5),
            ("affected-organism", "Organism", 6),
            ("clearance", "Clearance", 4),
            ("x-pharmgkb", EXT["pharmgkb"], 5),
            ("x-kegg", EXT["kegg"], 4),
            ("x-pubchem-substance", "PubChem-Substance", 5),
        ]
    ]
)

POOL = {"Drug": 40}


def main():
    rng = random.Random(7)
    lines = [
        f'<{iri}> <{LABEL}> "{name}"@en .'
        for iri, name in [
            (EXT["uniprot"], "UniProt entry"),
            (EXT["genbank"], "GenBank record"),
            (EXT["pubmed"], "PubMed article"),
            (EXT["pharmgkb"], "PharmGKB entry"),
            (EXT["kegg"], "KEGG entry"),
        ]
    ]
    nodes = {}

    def node(cls, i):
        if cls.startswith("http"):
            base = cls.rsplit(":", 1)[0].replace("_vocabulary", "")
            return f"{base}:R{i:03d}", False
        return f"{DB}{cls.lower()}-{i:03d}", True

    def ensure(cls, i):
        iri, local = node(cls, i)
        if (iri, cls) not in nodes:
            nodes[(iri, cls)] = True
            lines.append(f"<{iri}> <{RDF_TYPE}> <{cls if cls.startswith('http') else DV + cls}> .")
            if local:
                lines.append(f'<{iri}> <{LABEL}> "{cls} {i}"@en .')
        return iri

    for d, p, r, n in SCHEMA:
        for k in range(n):
            s = ensure(d, rng.randrange(POOL.get(d, n)))
            if r.startswith("xsd:"):
                lines.append(f'<{s}> <{DV}{p}> "{rng.uniform(-3, 600):.2f}"^^<{XSD}{r[4:]}> .')
            else:
                o = ensure(r, rng.randrange(POOL.get(r, max(3, n // 2))))
                lines.append(f"<{s}> <{DV}{p}> <{o}> .")
    with open("drugbank_sample.nt", "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
