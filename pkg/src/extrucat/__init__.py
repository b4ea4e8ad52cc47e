"""Semantic product catalogue and after-sales service platform for extruders.

An embedded RDF store and a SPARQL-subset engine back a catalogue, a guided
product search and a virtual technician, plus a CAD model sync pipeline and a
REST tier for the browser client.
"""

__version__ = "0.1.0"
