#!/usr/bin/env python3
import sys
import streamx


if __name__ == '__main__':
    sys.exit(streamx.main(sys.argv))
