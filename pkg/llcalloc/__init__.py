__version__ = "0.1.0"
__author__ = "Nitin Borwankar"
__email__ = "nborwankar@gmail.com"
