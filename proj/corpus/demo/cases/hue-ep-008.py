import requests

HEADERS = {'hue-application-key': 'demo-app-key'}


def list_lamps():
    url = 'https://hue-bridge.local/clip/v2'
    url += '/resource/lamp'
    resp = requests.get(url, headers=HEADERS)
    return resp.json()
